#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlsb {

enum class ErrorCode {
    InvalidGrid,
    InvalidParams,
    InvalidPotential,
    InvalidWidth,
    DomainTooSmall,
    InvalidScenario,
    ZeroNorm,
    NonFinite,
    OutsideValidityWindow,
    DegenerateStart,
    HypothesisViolated,
    InsufficientRecords,
    ParseError,
    CapExceeded,
    Io,
};

std::string_view to_string(ErrorCode code);

// Every library failure carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace nlsb
