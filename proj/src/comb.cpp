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

#include "qwork/comb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qwork/error.hpp"

namespace qwork {

DeltaComb DeltaComb::from_terms(std::vector<WeightedTerm> terms, double merge_tol,
                                double prune_tol) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const WeightedTerm& a, const WeightedTerm& b) { return a.value < b.value; });
  DeltaComb comb;
  comb.merge_tol_ = merge_tol;
  std::size_t i = 0;
  while (i < terms.size()) {
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j].value - terms[j - 1].value <= merge_tol) ++j;
    double value_sum = 0.0;
    cplx w{};
    for (std::size_t k = i; k < j; ++k) {
      value_sum += terms[k].value;
      w += terms[k].weight;
    }
    const double value = value_sum / static_cast<double>(j - i);
    if (std::abs(w.imag()) >= kImagTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "peak at " << value << " has imaginary weight " << w.imag();
      throw Error(ErrorCode::NonRealWeight, msg.str());
    }
    if (std::abs(w.real()) > prune_tol) comb.peaks_.push_back({value, w.real()});
    i = j;
  }
  return comb;
}

DeltaComb DeltaComb::from_peaks(std::vector<Peak> peaks, double merge_tol, double prune_tol) {
  std::vector<WeightedTerm> terms;
  terms.reserve(peaks.size());
  for (const auto& p : peaks) terms.push_back({p.value, cplx(p.weight)});
  return from_terms(std::move(terms), merge_tol, prune_tol);
}

double DeltaComb::total_weight() const {
  double s = 0.0;
  for (const auto& p : peaks_) s += p.weight;
  return s;
}

double DeltaComb::weight_at(double value, double tol) const {
  for (const auto& p : peaks_)
    if (std::abs(p.value - value) <= tol) return p.weight;
  return 0.0;
}

cplx DeltaComb::characteristic(double chi) const {
  cplx g{};
  for (const auto& p : peaks_) g += p.weight * std::polar(1.0, chi * p.value);
  return g;
}

double merge_tolerance_for(double eps_max) { return 1e-9 * std::max(1.0, std::abs(eps_max)); }

CombDifference compare_combs(const DeltaComb& a, const DeltaComb& b, double match_window) {
  CombDifference diff;
  const auto pa = a.peaks(), pb = b.peaks();
  std::size_t i = 0, j = 0;
  while (i < pa.size() || j < pb.size()) {
    if (i < pa.size() && j < pb.size() && std::abs(pa[i].value - pb[j].value) <= match_window) {
      diff.max_weight_diff = std::max(diff.max_weight_diff, std::abs(pa[i].weight - pb[j].weight));
      diff.max_position_diff = std::max(diff.max_position_diff, std::abs(pa[i].value - pb[j].value));
      ++i;
      ++j;
    } else if (j >= pb.size() || (i < pa.size() && pa[i].value < pb[j].value)) {
      diff.max_weight_diff = std::max(diff.max_weight_diff, std::abs(pa[i].weight));
      ++diff.unmatched;
      ++i;
    } else {
      diff.max_weight_diff = std::max(diff.max_weight_diff, std::abs(pb[j].weight));
      ++diff.unmatched;
      ++j;
    }
  }
  return diff;
}

}  // namespace qwork
