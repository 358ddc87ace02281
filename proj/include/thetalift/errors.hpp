/* Copyright 2026 The thetalift Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace thetalift {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};

struct ContextMismatch : Error {
    ContextMismatch() : Error("operands belong to different contexts") {}
};

struct PrecisionLoss : Error {
    explicit PrecisionLoss(const std::string& w = "cancellation exceeds tracked precision") : Error(w) {}
};

struct ZeroInput : Error {
    ZeroInput() : Error("zero input where a nonzero element is required") {}
};

struct LevelOverflow : Error {
    explicit LevelOverflow(const std::string& w = "character level exceeds the context budget") : Error(w) {}
};

struct NonStabilized : Error {
    NonStabilized() : Error("Weil index integral did not stabilize; raise precision") {}
};

struct NonNorm : Error {
    NonNorm() : Error("element is not a norm from E^x") {}
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& w = "enumeration exceeds the configured budget") : Error(w) {}
};

struct NotOrthogonal : Error {
    NotOrthogonal() : Error("matrix does not preserve the norm form") {}
};

struct NotSymplectic : Error {
    NotSymplectic() : Error("matrix does not preserve the symplectic form") {}
};

struct NotIsotypic : Error {
    NotIsotypic() : Error("function is not theta-isotypic") {}
};

struct NotInGL2N : Error {
    NotInGL2N() : Error("determinant is not a norm from E^x") {}
};

struct InadmissiblePair : Error {
    explicit InadmissiblePair(const std::string& w) : Error("inadmissible pair: " + w) {}
};

struct NotRegular : Error {
    NotRegular() : Error("restricted character is not regular") {}
};

struct ValidationFailed : Error {
    explicit ValidationFailed(const std::string& w) : Error("validation failed: " + w) {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& w) : Error("invalid input: " + w) {}
};

}  // namespace thetalift
