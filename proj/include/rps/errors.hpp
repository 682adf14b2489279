#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rps {

/// Malformed expression source. `offset` is the byte position of the problem.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation outside the domain of a function (ln of nonpositive, 1/0, ...),
/// or a result that overflowed to a non-finite value.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid problem data: bad operator parameters, violated (C1)-(C3) bounds,
/// unreadable configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical stage failed (h-inversion bracket overflow, non-finite iterate).
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& stage, double radius, const std::string& detail)
        : std::runtime_error(stage + " failed at r=" + std::to_string(radius) + ": " + detail),
          stage_(stage), radius_(radius) {}

    const std::string& stage() const noexcept { return stage_; }
    double radius() const noexcept { return radius_; }

private:
    std::string stage_;
    double radius_;
};

}  // namespace rps
