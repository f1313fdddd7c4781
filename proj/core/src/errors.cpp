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

#include "chf/errors.hpp"

namespace chf {


ParseError::ParseError(std::string message, int line, int column, std::string snippet)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message +
            (snippet.empty() ? "" : " near '" + snippet + "'")),
      message_(std::move(message)),
      line_(line),
      column_(column),
      snippet_(std::move(snippet)) {}

MalformedPattern::MalformedPattern(const std::string& field, const std::string& message, int line)
    : Error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
            "malformed pattern (" + field + "): " + message),
      field_(field),
      line_(line) {}

ResourceLimit::ResourceLimit(std::size_t budget)
    : Error("step budget of " + std::to_string(budget) + " resolution steps exceeded"),
      budget_(budget) {}

UniverseTooLarge::UniverseTooLarge(std::size_t size, std::size_t bound)
    : Error("atom universe of " + std::to_string(size) + " exceeds brute-force bound " +
            std::to_string(bound)) {}

ValidationError::ValidationError(std::string field, const std::string& message)
    : Error(field + ": " + message), field_(std::move(field)) {}

}  // namespace chf
