// Copyright 2026 The physkg Authors.
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

#ifndef PHYSKG_ERRORS_HPP_
#define PHYSKG_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace physkg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input could not be read as the expected document at all (bad JSON, wrong
// top-level type, unreadable file).
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnknownEntityError : public Error {
 public:
  explicit UnknownEntityError(std::string id)
      : Error("unknown entity: " + id), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class UnknownUnitError : public Error {
 public:
  explicit UnknownUnitError(std::string unit)
      : Error("unknown unit: " + unit), unit_(std::move(unit)) {}
  const std::string& unit() const noexcept { return unit_; }

 private:
  std::string unit_;
};

// A formula was evaluated outside its domain (e.g. zero travel speed).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace physkg

#endif  // PHYSKG_ERRORS_HPP_
