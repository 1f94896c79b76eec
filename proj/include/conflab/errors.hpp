#pragma once

#include <stdexcept>
#include <string>

namespace conflab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class SpaceMismatch : public Error {
public:
    using Error::Error;
};

// Appendix constructions report which condition broke.
class ConstraintViolation : public Error {
public:
    ConstraintViolation(std::string condition, const std::string& detail)
        : Error("constraint " + condition + " violated: " + detail), condition_(std::move(condition)) {}
    const std::string& condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

class PrecisionError : public Error {
public:
    using Error::Error;
};

class NotPeriodic : public Error {
public:
    using Error::Error;
};

class NotCyclic : public Error {
public:
    NotCyclic(double defect)
        : Error("orbit is not F-cyclic (defect " + std::to_string(defect) + ")"), defect_(defect) {}
    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

class BracketFailed : public Error {
public:
    using Error::Error;
};

class SupportMismatch : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error("config field '" + field + "': " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace conflab
