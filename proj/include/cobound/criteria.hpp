// Copyright 2026 The cobound Authors.
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

#ifndef COBOUND_CRITERIA_HPP
#define COBOUND_CRITERIA_HPP

#include <optional>
#include <string>
#include <vector>

#include "cobound/rational.hpp"
#include "json.hpp"

namespace cobound {

/// One checked statement: a named boolean with the numbers behind it.
struct Criterion {
  std::string name;
  bool holds = false;
  double value = 0.0;   // left-hand side, or the quantity under test
  double bound = 0.0;   // right-hand side, or the reference it is compared to
  double margin = 0.0;  // signed distance to the boundary; >= 0 when it holds
  double error = 0.0;   // numerical error estimate attached to value, 0 if exact
  std::string verdict;  // free label, e.g. "holds", "boundary", "diverges"
  std::string detail;   // exact form of the margin or the decision rule used
  std::optional<Rational> exact_margin;
};

struct CriteriaReport {
  std::string subject;
  std::vector<Criterion> criteria;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  bool all_hold() const;
  const Criterion& at(const std::string& name) const;
  Criterion& add(Criterion c);
  nlohmann::ordered_json to_json() const;
};

}  // namespace cobound

#endif  // COBOUND_CRITERIA_HPP
