// Copyright 2026 The qwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <vector>

#include "qwork/linalg.hpp"

namespace qwork {

struct Peak {
  double value;
  double weight;
  friend bool operator==(const Peak&, const Peak&) = default;
};

struct WeightedTerm {
  double value;
  cplx weight;
};

// Exact discrete quasi-probability distribution: sum_f w_f delta(F - f).
// Peaks are sorted by value and pairwise farther apart than the merge
// tolerance; weights are real (may be negative).
class DeltaComb {
 public:
  static constexpr double kImagTolerance = 1e-10;
  static constexpr double kPruneTolerance = 1e-13;

  DeltaComb() = default;

  // Sorts, merges values that chain within merge_tol, sums weights, checks
  // that every merged imaginary part is below 1e-10 (NonRealWeight
  // otherwise) and drops peaks with |w| <= prune_tol.
  static DeltaComb from_terms(std::vector<WeightedTerm> terms, double merge_tol,
                              double prune_tol = kPruneTolerance);
  static DeltaComb from_peaks(std::vector<Peak> peaks, double merge_tol,
                              double prune_tol = kPruneTolerance);

  std::span<const Peak> peaks() const noexcept { return peaks_; }
  std::size_t size() const noexcept { return peaks_.size(); }
  bool empty() const noexcept { return peaks_.empty(); }
  double merge_tolerance() const noexcept { return merge_tol_; }

  double total_weight() const;
  // Weight of the peak within tol of value, 0 if none.
  double weight_at(double value, double tol) const;
  // G(chi) = sum_f w_f exp(i chi f)
  cplx characteristic(double chi) const;

 private:
  std::vector<Peak> peaks_;
  double merge_tol_ = 0.0;
};

// Merge tolerance used throughout: 1e-9 * max(1, eps_max).
double merge_tolerance_for(double eps_max);

struct CombDifference {
  double max_weight_diff = 0.0;    // over matched peaks and unmatched |w|
  double max_position_diff = 0.0;  // over matched peaks
  std::size_t unmatched = 0;       // peaks present in one comb only
};

// Pairs peaks whose values lie within match_window of each other.
CombDifference compare_combs(const DeltaComb& a, const DeltaComb& b, double match_window = 1e-6);

}  // namespace qwork
