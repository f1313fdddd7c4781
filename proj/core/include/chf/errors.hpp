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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chf {

// Base of every error the engine reports to callers.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column, std::string snippet);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }
  const std::string& snippet() const { return snippet_; }

 private:
  std::string message_;
  int line_;
  int column_;
  std::string snippet_;
};

class GroundError : public Error {
 public:
  using Error::Error;
};

class MalformedPattern : public Error {
 public:
  MalformedPattern(const std::string& field, const std::string& message, int line = 0);

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

class ReservedPrefixCollision : public Error {
 public:
  using Error::Error;
};

// Thrown when a query exceeds the configured resolution-step budget.
class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(std::size_t budget);
  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
};

class UniverseTooLarge : public Error {
 public:
  UniverseTooLarge(std::size_t size, std::size_t bound);
};

class VocabularyError : public Error {
 public:
  using Error::Error;
};

// Record validation failure; `field` names the offending field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace chf
