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

// Permutation test sets: gold entities in a test corpus are swapped for
// same-category entity surfaces from a donor corpus that never occur in an
// exclusion corpus, leaving the surrounding context untouched.

#ifndef NERPORT_PERTURBATION_H_
#define NERPORT_PERTURBATION_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "nerport/corpus.h"

namespace nerport {

struct DonorEntry {
  std::string surface;  // normalized
  std::string text;     // first original-cased occurrence, trimmed
};

struct DonorPool {
  // Category -> entries sorted by surface. Every category of the label set is
  // present; empty pools are allowed.
  std::map<std::string, std::vector<DonorEntry>> by_category;

  std::size_t size() const;
};

// Donor gold surfaces whose normalized form appears nowhere among the
// exclusion corpus's gold surfaces (any category).
DonorPool BuildDonorPool(const Corpus& donor, const Corpus& exclusion);

struct Replacement {
  std::string doc_id;
  std::string category;
  std::string original_text;
  std::string original_surface;
  std::string replacement_surface;  // empty when skipped
  std::size_t new_start = 0;
  std::size_t new_end = 0;
  bool skipped = false;
};

struct PermutationResult {
  Corpus corpus;
  std::vector<Replacement> log;  // document order, then mention order
};

// Every gold mention whose category pool is non-empty is replaced by a pool
// entry drawn uniformly with replacement (Rng(seed).Below(pool size), one draw
// per replaced mention in document and mention order). Text is rebuilt,
// offsets shifted and tokens and sentences re-derived. Mentions with an empty
// pool stay as they are and are logged as skipped.
PermutationResult PermuteTestSet(const Corpus& test, const DonorPool& pool,
                                 std::uint64_t seed);

// Columns: doc_id,category,original_text,original_surface,
// replacement_surface,new_start,new_end,status.
void WriteReplacementLogCsv(std::ostream& out,
                            const std::vector<Replacement>& log);

}  // namespace nerport

#endif  // NERPORT_PERTURBATION_H_
