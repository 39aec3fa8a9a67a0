/*
   Copyright 2026 The polyembed Authors

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

#ifndef POLYEMBED_ERRORS_HPP
#define POLYEMBED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polyembed {

/// Stable identifiers, echoed verbatim into JSON error objects.
enum class ErrorKind {
    ReducibleMinimalPolynomial,
    UnsupportedTowerShape,
    DenominatorVanishes,
    DegreeMismatch,
    BoundTooLarge,
    RetriesExhausted,
    VerificationFailed,
    AllConstant,
    InconsistentSystem,
    NotClosed,
    InconsistentExtension,
    NotRestricting,
    TraceContradiction,
    NotNilpotentOnInput,
    PreconditionFailed,
    CoefficientsOutsideField,
    ParseError,
    UndefinedName,
    DuplicateTask,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::ReducibleMinimalPolynomial: return "ReducibleMinimalPolynomial";
        case ErrorKind::UnsupportedTowerShape: return "UnsupportedTowerShape";
        case ErrorKind::DenominatorVanishes: return "DenominatorVanishes";
        case ErrorKind::DegreeMismatch: return "DegreeMismatch";
        case ErrorKind::BoundTooLarge: return "BoundTooLarge";
        case ErrorKind::RetriesExhausted: return "RetriesExhausted";
        case ErrorKind::VerificationFailed: return "VerificationFailed";
        case ErrorKind::AllConstant: return "AllConstant";
        case ErrorKind::InconsistentSystem: return "InconsistentSystem";
        case ErrorKind::NotClosed: return "NotClosed";
        case ErrorKind::InconsistentExtension: return "InconsistentExtension";
        case ErrorKind::NotRestricting: return "NotRestricting";
        case ErrorKind::TraceContradiction: return "TraceContradiction";
        case ErrorKind::NotNilpotentOnInput: return "NotNilpotentOnInput";
        case ErrorKind::PreconditionFailed: return "PreconditionFailed";
        case ErrorKind::CoefficientsOutsideField: return "CoefficientsOutsideField";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UndefinedName: return "UndefinedName";
        case ErrorKind::DuplicateTask: return "DuplicateTask";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// what() without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

/// Carries a human-readable witness (a factor, an element, a rejected point).
class WitnessError : public Error {
public:
    WitnessError(ErrorKind kind, const std::string& what, std::string witness)
        : Error(kind, what + " [witness: " + witness + "]"), witness_(std::move(witness)) {}

    const std::string& witness() const noexcept { return witness_; }

private:
    std::string witness_;
};

}  // namespace polyembed

#endif  // POLYEMBED_ERRORS_HPP
