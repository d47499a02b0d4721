// Copyright 2026 The nerport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nerport/synthetic.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "nerport/random.h"
#include "nerport/utf8.h"

namespace nerport {
namespace {

struct Piece {
  std::string literal;
  std::string category;  // non-empty for placeholders
};

// Splits "a {X} b" into literal and placeholder pieces.
std::vector<Piece> ParseTemplate(const std::string& text) {
  std::vector<Piece> pieces;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find('{', pos);
    if (open == std::string::npos) {
      pieces.push_back({text.substr(pos), {}});
      break;
    }
    if (open > pos) pieces.push_back({text.substr(pos, open - pos), {}});
    const auto close = text.find('}', open);
    if (close == std::string::npos) {
      throw std::invalid_argument("unterminated placeholder in template: " +
                                  text);
    }
    pieces.push_back({{}, text.substr(open + 1, close - open - 1)});
    pos = close + 1;
  }
  return pieces;
}

std::size_t WindowOffset(double shift, std::size_t window, Site site) {
  if (site == Site::kA) return 0;
  return static_cast<std::size_t>(std::lround(shift * static_cast<double>(window)));
}

}  // namespace

void GeneratorSpec::Validate() const {
  if (templates.empty()) throw std::invalid_argument("empty template list");
  if (!(shift >= 0.0 && shift <= 1.0)) {
    throw std::invalid_argument("shift must lie in [0, 1]");
  }
  if (pool_window == 0 || template_window == 0) {
    throw std::invalid_argument("windows must be positive");
  }
  if (templates.size() < 2 * template_window) {
    throw std::invalid_argument("need at least 2 * template_window templates");
  }
  if (min_sentences == 0 || min_sentences > max_sentences) {
    throw std::invalid_argument("invalid sentence count range");
  }
  for (const auto& t : templates) {
    for (const auto& piece : ParseTemplate(t)) {
      if (piece.category.empty()) continue;
      if (!label_set.Contains(piece.category)) {
        throw std::invalid_argument("template uses unknown category '" +
                                    piece.category + "'");
      }
      auto it = surface_pools.find(piece.category);
      if (it == surface_pools.end() || it->second.size() < 2 * pool_window) {
        throw std::invalid_argument("surface pool for '" + piece.category +
                                    "' needs at least 2 * pool_window entries");
      }
    }
  }
}

GeneratorSpec DefaultGeneratorSpec() {
  GeneratorSpec spec;
  spec.surface_pools = {
      {"Hormone_receptor_type",
       {"ER", "PR", "HER2", "estrogen receptor", "progesterone receptor",
        "HER2/neu", "ERBB2", "PgR", "Her-2", "ER alpha", "androgen receptor",
        "c-erbB-2", "ER/PR", "hormone receptor", "ESR1", "HER-2/neu"}},
      {"Hormone_receptor_status",
       {"positive", "negative", "strongly positive", "weakly positive",
        "equivocal", "3+", "1+", "2+", "overexpressed", "not amplified",
        "amplified", "focally positive", "diffusely positive", "0",
        "borderline", "low positive"}},
      {"Tumor_size",
       {"2.1 cm", "1.5 cm", "3 cm", "0.8 cm", "12 mm", "25 mm", "4.2 cm",
        "1.2 x 0.9 cm", "2.5 x 1.8 cm", "9 mm", "3.4 cm", "0.5 cm", "18 mm",
        "5.0 cm", "2 cm", "7 mm"}},
      {"Tumor_site",
       {"upper outer quadrant", "lower inner quadrant", "retroareolar",
        "12 o'clock", "subareolar", "upper inner quadrant",
        "lower outer quadrant", "central breast", "axillary tail",
        "3 o'clock", "9 o'clock", "periareolar", "2 o'clock", "upper central",
        "10 o'clock", "lower central"}},
      {"Cancer_grade",
       {"grade 1", "grade 2", "grade 3", "Nottingham grade 2",
        "well differentiated", "moderately differentiated",
        "poorly differentiated", "high grade", "low grade",
        "intermediate grade", "Nottingham grade 3", "Nottingham grade 1",
        "SBR grade 2", "grade II", "grade III", "grade I"}},
      {"Histological_type",
       {"invasive ductal carcinoma", "invasive lobular carcinoma",
        "ductal carcinoma in situ", "IDC", "ILC", "DCIS",
        "mucinous carcinoma", "tubular carcinoma", "lobular carcinoma in situ",
        "LCIS", "medullary carcinoma", "metaplastic carcinoma",
        "papillary carcinoma", "inflammatory carcinoma",
        "mixed ductal and lobular carcinoma", "micropapillary carcinoma"}},
      {"Cancer_laterality",
       {"left", "right", "bilateral", "left breast", "right breast", "L", "R",
        "both breasts", "left-sided", "right-sided", "contralateral",
        "ipsilateral", "left side", "right side", "Lt", "Rt"}},
      {"Cancer_stage",
       {"stage I", "stage II", "stage IIA", "stage IIB", "stage III",
        "stage IIIA", "stage IV", "pT1c", "pT2", "pT1b N0", "T2N1M0",
        "stage 0", "pT3", "T1cN0M0", "stage IB", "stage IIIC"}},
  };
  spec.templates = {
      // Site A window at shift 0.
      "Immunohistochemistry shows {Hormone_receptor_type} "
      "{Hormone_receptor_status} in tumor cells .",
      "The tumor measures {Tumor_size} in greatest dimension .",
      "The lesion is located in the {Tumor_site} .",
      "Diagnosis : {Histological_type} , {Cancer_grade} .",
      "Pathologic stage is {Cancer_stage} .",
      "Laterality : {Cancer_laterality} .",
      "Patient returns to clinic for follow up today .",
      "Receptor studies : {Hormone_receptor_type} is "
      "{Hormone_receptor_status} .",
      "Specimen shows {Histological_type} measuring {Tumor_size} .",
      "Margins are free of tumor .",
      "Tumor involves the {Cancer_laterality} breast at {Tumor_site} .",
      "Overall histologic grade is {Cancer_grade} with clinical "
      "{Cancer_stage} .",
      // Site B window at shift 1.
      "Result of {Hormone_receptor_type} testing was "
      "{Hormone_receptor_status} .",
      "Size of invasive tumor : {Tumor_size} .",
      "Biopsy site : {Tumor_site} , {Cancer_laterality} .",
      "Histologic type : {Histological_type} .",
      "Tumor grade : {Cancer_grade} .",
      "AJCC stage : {Cancer_stage} .",
      "Discussed treatment options with the patient and family .",
      "Ultrasound demonstrated a {Tumor_size} mass in the {Tumor_site} .",
      "Findings consistent with {Histological_type} of the "
      "{Cancer_laterality} .",
      "Staining for {Hormone_receptor_type} was {Hormone_receptor_status} .",
      "She was diagnosed with {Cancer_stage} disease .",
      "No evidence of distant metastasis was seen .",
  };
  return spec;
}

GeneratorSpec LoadGeneratorSpec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open generator spec: " + path);
  GeneratorSpec spec = DefaultGeneratorSpec();
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    for (const auto& [key, value] : j.items()) {
      if (key == "categories") {
        spec.label_set = LabelSet(value.get<std::vector<std::string>>());
      } else if (key == "surface_pools") {
        spec.surface_pools =
            value.get<std::map<std::string, std::vector<std::string>>>();
      } else if (key == "templates") {
        spec.templates = value.get<std::vector<std::string>>();
      } else if (key == "pool_window") {
        spec.pool_window = value.get<std::size_t>();
      } else if (key == "template_window") {
        spec.template_window = value.get<std::size_t>();
      } else if (key == "documents") {
        spec.documents = value.get<std::size_t>();
      } else if (key == "min_sentences") {
        spec.min_sentences = value.get<std::size_t>();
      } else if (key == "max_sentences") {
        spec.max_sentences = value.get<std::size_t>();
      } else if (key == "shift") {
        spec.shift = value.get<double>();
      } else if (key == "id_prefix") {
        spec.id_prefix = value.get<std::string>();
      } else {
        throw std::invalid_argument("unknown generator spec field '" + key +
                                    "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  spec.Validate();
  return spec;
}

Corpus GenerateSynthetic(const GeneratorSpec& spec, Site site,
                         std::uint64_t seed) {
  spec.Validate();
  const std::size_t template_offset =
      WindowOffset(spec.shift, spec.template_window, site);
  const std::size_t pool_offset = WindowOffset(spec.shift, spec.pool_window, site);
  std::vector<std::vector<Piece>> templates;
  for (std::size_t i = 0; i < spec.template_window; ++i) {
    templates.push_back(ParseTemplate(spec.templates[template_offset + i]));
  }

  Rng rng(seed);
  Corpus corpus;
  corpus.name = site == Site::kA ? "synthetic-a" : "synthetic-b";
  corpus.label_set = spec.label_set;
  const int width = spec.documents >= 10000 ? 6 : 4;
  for (std::size_t d = 0; d < spec.documents; ++d) {
    char id[64];
    std::snprintf(id, sizeof(id), "%s-%0*zu", spec.id_prefix.c_str(), width,
                  d + 1);
    const DocType type =
        rng.Below(2) == 0 ? DocType::kClinicalNote : DocType::kPathologyReport;
    const std::size_t sentences =
        spec.min_sentences +
        rng.Below(spec.max_sentences - spec.min_sentences + 1);
    std::u32string text;
    std::vector<RawSpan> spans;
    for (std::size_t s = 0; s < sentences; ++s) {
      if (s > 0) text.push_back(U' ');
      for (const Piece& piece : templates[rng.Below(templates.size())]) {
        if (piece.category.empty()) {
          text += DecodeUtf8(piece.literal);
          continue;
        }
        const auto& pool = spec.surface_pools.at(piece.category);
        const std::string& surface =
            pool[pool_offset + rng.Below(spec.pool_window)];
        const std::size_t start = text.size();
        text += DecodeUtf8(surface);
        spans.push_back({start, text.size(), piece.category});
      }
    }
    corpus.documents.push_back(
        MakeDocument(id, type, std::move(text), spans, spec.label_set));
  }
  return corpus;
}

}  // namespace nerport
