#pragma once

#include <stdexcept>
#include <string>

namespace kinequil {

/// A steady-state construction failed (no vacuum boundary, horizon formation,
/// shooting bracket not found, ...). The message carries a short failure code
/// prefix used in scan rows.
class BuildError : public std::runtime_error {
public:
    BuildError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kinequil
