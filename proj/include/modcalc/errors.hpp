#pragma once

#include <stdexcept>
#include <string>

namespace modcalc {

/// Raised when an input violates a documented precondition. `field()` names
/// the offending input element so the CLI can report it.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace modcalc
