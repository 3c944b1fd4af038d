#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace entropic {

/// Exception carrying a stable machine-readable code ("invalid-time",
/// "disconnected-space", ...) next to the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Iteration budget exhausted; carries the residual reached so far.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, double residual)
        : Error("no-convergence", what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace entropic
