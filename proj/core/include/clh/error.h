// Copyright 2026 The clh Authors
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

#ifndef CLH_ERROR_H
#define CLH_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace clh {

enum class ErrorCode {
    NotHermitian,
    Numerical,
    DimensionMismatch,
    NotPSD,
    UnknownRegister,
    RegisterNotInSupport,
    NonCommuting,
    OverlapNotSingleton,
    NotRank1,
    NotProjector,
    HypothesisViolated,
    OverlapViolation,
    BlockOutOfRange,
    NotClassical,
    InvalidWitness,
    BranchOutOfRange,
    NoCyclicOrder,
    PreconditionViolated,
    VacuousBlock,
    MoreThanTwoActors,
    GridTooSmall,
    RoutingFailed,
    NotTwoLocal,
    BudgetExhausted,
    GatesDoNotCommute,
    NotProjectors,
    TooLarge,
    ParseError,
    InsufficientDimension,
    InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library. The code is stable; the message is for humans.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);
    ErrorCode code() const {
        return code_;
    }

   private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string &message);

}  // namespace clh

#endif
