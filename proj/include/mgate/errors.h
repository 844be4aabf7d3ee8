#ifndef MGATE_ERRORS_H
#define MGATE_ERRORS_H

#include <stdexcept>
#include <string>
#include <vector>

namespace mgate {

/// Error classes double as CLI exit codes.
enum class ErrorClass : int {
    Config = 2,
    Regime = 3,
    Numerical = 4,
    Io = 5,
};

const char *error_class_name(ErrorClass c);

class Error : public std::runtime_error {
   public:
    Error(ErrorClass cls, const std::string &what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }

   private:
    ErrorClass cls_;
};

struct Violation {
    std::string path;
    std::string message;
    bool operator==(const Violation &) const = default;
};

/// Carries every violation found, not only the first one.
class ConfigError : public Error {
   public:
    explicit ConfigError(std::vector<Violation> violations);
    ConfigError(std::string path, std::string message);
    const std::vector<Violation> &violations() const { return violations_; }

   private:
    std::vector<Violation> violations_;
};

/// The requested parameters sit outside the regime where the model is defined.
class RegimeError : public Error {
   public:
    explicit RegimeError(const std::string &what) : Error(ErrorClass::Regime, what) {}
};

class NumericalError : public Error {
   public:
    explicit NumericalError(const std::string &what) : Error(ErrorClass::Numerical, what) {}
};

class NoRootError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

class SingularSystemError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

class ZeroSlopeError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

class IoError : public Error {
   public:
    explicit IoError(const std::string &what) : Error(ErrorClass::Io, what) {}
};

}  // namespace mgate

#endif
