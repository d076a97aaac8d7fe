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

#include "cobound/criteria.hpp"

#include <algorithm>
#include <stdexcept>

namespace cobound {

bool CriteriaReport::all_hold() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.holds; });
}

const Criterion& CriteriaReport::at(const std::string& name) const {
  for (const Criterion& c : criteria) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no criterion named " + name);
}

Criterion& CriteriaReport::add(Criterion c) {
  if (c.verdict.empty()) c.verdict = c.holds ? "holds" : "fails";
  criteria.push_back(std::move(c));
  return criteria.back();
}

nlohmann::ordered_json CriteriaReport::to_json() const {
  nlohmann::ordered_json out;
  out["subject"] = subject;
  out["all_hold"] = all_hold();
  auto& list = out["criteria"] = nlohmann::ordered_json::array();
  for (const Criterion& c : criteria) {
    list.push_back({{"name", c.name},
                    {"holds", c.holds},
                    {"verdict", c.verdict},
                    {"value", c.value},
                    {"bound", c.bound},
                    {"margin", c.margin},
                    {"error", c.error},
                    {"detail", c.detail}});
    if (c.exact_margin) list.back()["exact_margin"] = c.exact_margin->str();
  }
  if (!extra.empty()) out["extra"] = extra;
  return out;
}

}  // namespace cobound
