#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace errsum {

/// Raised when an argument falls outside the domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An integral that does not exist (e.g. a predictive at coincident points).
class divergence_error : public domain_error {
public:
    using domain_error::domain_error;
};

/// Schema or precondition violations found while validating user input.
/// Carries every offending field, not just the first.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(std::vector<std::string> fields)
        : std::invalid_argument(join(fields)), fields_(std::move(fields)) {}

    [[nodiscard]] const std::vector<std::string>& fields() const noexcept { return fields_; }

private:
    static std::string join(const std::vector<std::string>& fields) {
        std::string out = "validation failed:";
        for (const auto& f : fields) {
            out += "\n  - ";
            out += f;
        }
        return out;
    }

    std::vector<std::string> fields_;
};

}  // namespace errsum
