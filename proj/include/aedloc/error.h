// Copyright 2026 The aedloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AEDLOC_ERROR_H_
#define AEDLOC_ERROR_H_

#include <stdexcept>
#include <string>

namespace aedloc {

// Base for all library errors. DataError covers malformed or missing inputs
// (files, configs); DomainError covers arguments outside an operation's domain.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace aedloc

#endif  // AEDLOC_ERROR_H_
