#pragma once

#include <stdexcept>
#include <string>

namespace noise_lab {

/// Malformed or semantically invalid input (bad probabilities, mismatched
/// algebra sizes, dyadic sample points, ...).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation was refused because it exceeds a configured size cap.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace noise_lab
