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

#include <doctest.h>

#include "qwork/comb.hpp"
#include "qwork/error.hpp"

using namespace qwork;

TEST_CASE("terms within the merge tolerance collapse into one peak") {
  const auto c = DeltaComb::from_terms(
      {{1.0, 0.25}, {-0.5, 0.5}, {1.0 + 4e-10, 0.25}, {0.0, cplx(0.0, 1e-12)}}, 1e-9);
  REQUIRE(c.size() == 2);  // the zero-weight peak at 0 is pruned
  CHECK(c.peaks()[0].value == -0.5);
  CHECK(c.peaks()[1].value == doctest::Approx(1.0 + 2e-10).epsilon(1e-15));
  CHECK(c.peaks()[1].weight == doctest::Approx(0.5));
  CHECK(c.total_weight() == doctest::Approx(1.0));
  CHECK(c.weight_at(1.0, 1e-9) == doctest::Approx(0.5));
  CHECK(c.weight_at(3.0, 1e-9) == 0.0);
}

TEST_CASE("peaks are sorted and separated by more than the tolerance") {
  std::vector<WeightedTerm> terms;
  for (int i = 0; i < 50; ++i) terms.push_back({static_cast<double>((i * 37) % 11) * 0.5, 0.02});
  const auto c = DeltaComb::from_terms(terms, 1e-9);
  for (std::size_t i = 1; i < c.size(); ++i)
    CHECK(c.peaks()[i].value - c.peaks()[i - 1].value > 1e-9);
  CHECK(c.total_weight() == doctest::Approx(1.0));
}

TEST_CASE("conjugate pairs cancel imaginary parts") {
  const auto c = DeltaComb::from_terms({{0.5, cplx(0.3, 0.2)}, {0.5, cplx(0.3, -0.2)}}, 1e-9);
  CHECK(c.peaks()[0].weight == doctest::Approx(0.6));
}

TEST_CASE("residual imaginary weight is an error") {
  try {
    DeltaComb::from_terms({{0.5, cplx(1.0, 1e-9)}}, 1e-9);
    FAIL("expected NonRealWeight");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonRealWeight);
  }
  CHECK_NOTHROW(DeltaComb::from_terms({{0.5, cplx(1.0, 5e-11)}}, 1e-9));
}

TEST_CASE("characteristic function") {
  const auto c = DeltaComb::from_peaks({{-1.0, 0.25}, {1.0, 0.75}}, 1e-9);
  const double chi = 0.7;
  const cplx expected = 0.25 * std::polar(1.0, -chi) + 0.75 * std::polar(1.0, chi);
  CHECK(std::abs(c.characteristic(chi) - expected) < 1e-15);
  CHECK(std::abs(c.characteristic(0.0) - 1.0) < 1e-15);
}

TEST_CASE("comb comparison") {
  const auto a = DeltaComb::from_peaks({{0.0, 0.5}, {1.0, 0.5}}, 1e-9);
  const auto b = DeltaComb::from_peaks({{0.0, 0.4}, {1.0 + 1e-8, 0.5}, {2.0, 0.1}}, 1e-9);
  const auto d = compare_combs(a, b);
  CHECK(d.unmatched == 1);
  CHECK(d.max_weight_diff == doctest::Approx(0.1));
  CHECK(d.max_position_diff == doctest::Approx(1e-8));
  CHECK(compare_combs(a, a).max_weight_diff == 0.0);
}

TEST_CASE("merge tolerance scales with the energy scale") {
  CHECK(merge_tolerance_for(0.5) == 1e-9);
  CHECK(merge_tolerance_for(-20.0) == doctest::Approx(2e-8));
}
