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

// Synthetic two-site corpora for self-tests and desk-scale experiments.
//
// A generator spec holds, per category, an ordered surface pool of at least
// 2 * pool_window entries and an ordered list of at least 2 * template_window
// sentence templates with "{Category}" placeholders. Site A draws from the
// first window of each list; site B from the window starting at
// round(shift * window). Shift 0 gives both sites the same distribution, shift
// 1 gives disjoint surfaces and templates.

#ifndef NERPORT_SYNTHETIC_H_
#define NERPORT_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nerport/corpus.h"

namespace nerport {

enum class Site { kA, kB };

struct GeneratorSpec {
  LabelSet label_set = LabelSet::Default();
  std::map<std::string, std::vector<std::string>> surface_pools;
  std::vector<std::string> templates;
  std::size_t pool_window = 8;
  std::size_t template_window = 12;
  std::size_t documents = 60;
  std::size_t min_sentences = 4;
  std::size_t max_sentences = 8;
  double shift = 0.0;
  std::string id_prefix = "doc";

  // Throws std::invalid_argument on an empty template list, short pools,
  // unknown placeholders or shift outside [0, 1].
  void Validate() const;
};

// Breast cancer phenotype pools and pathology-style templates.
GeneratorSpec DefaultGeneratorSpec();

// Reads a JSON generator spec; absent fields keep their defaults.
GeneratorSpec LoadGeneratorSpec(const std::string& path);

// Deterministic in (spec, site, seed).
Corpus GenerateSynthetic(const GeneratorSpec& spec, Site site,
                         std::uint64_t seed);

}  // namespace nerport

#endif  // NERPORT_SYNTHETIC_H_
