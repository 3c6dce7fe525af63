/*
   Copyright 2026 The qdp Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace qdp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QDP_DEFINE_ERROR(Name)                 \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Error(std::string(#Name ": ") + what) {} \
  }

QDP_DEFINE_ERROR(NotInvertible);
QDP_DEFINE_ERROR(ContextMismatch);
QDP_DEFINE_ERROR(TruncationTooSmall);
QDP_DEFINE_ERROR(NotAConnection);
QDP_DEFINE_ERROR(NotFree);
QDP_DEFINE_ERROR(BudgetExceeded);
QDP_DEFINE_ERROR(NotReduced);
QDP_DEFINE_ERROR(RelationMismatch);
QDP_DEFINE_ERROR(WindowExceeded);
QDP_DEFINE_ERROR(HypothesisViolated);
QDP_DEFINE_ERROR(IndexOutOfRange);
QDP_DEFINE_ERROR(NotAPartition);
QDP_DEFINE_ERROR(NoStablePolynomial);
QDP_DEFINE_ERROR(IndexOutOfWindow);
QDP_DEFINE_ERROR(ParseError);

#undef QDP_DEFINE_ERROR

}  // namespace qdp
