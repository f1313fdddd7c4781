// Copyright 2026 The CHF Advisor Authors
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

// JSON wire forms shared by the CLI and the HTTP service. Atoms travel as
// their .lp text rendering.

#include <json.hpp>

#include "chf/abduction.hpp"
#include "chf/kb.hpp"

namespace chf::wire {

inline nlohmann::json literals(const std::vector<Literal>& ls) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& l : ls) out.push_back(to_string(l));
  return out;
}

inline nlohmann::json support(const PartialAnswerSet& a) {
  return {{"positive", literals(a.positive)}, {"nafs", literals(a.nafs)}};
}

inline nlohmann::json recommendation(const kb::Recommendation& r) {
  return {{"treatment", r.treatment}, {"class", r.class_label}, {"support", support(r.support)}};
}

inline nlohmann::json assumptions(const AbductiveResult& r) {
  return {{"positive", literals(r.assumed_true)}, {"negative", literals(r.assumed_false)}};
}

inline nlohmann::json whatif(const AbductiveResult& r) {
  return {{"assumptions", assumptions(r)}, {"support", support(r.answer)}};
}

}  // namespace chf::wire
