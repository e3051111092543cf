#pragma once

#include <stdexcept>
#include <string>

namespace sev {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class NumericalError : public Error { public: using Error::Error; };
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }
private:
    double residual_;
};
class SetupError : public Error { public: using Error::Error; };
class SchemaError : public Error { public: using Error::Error; };
class IrregularError : public Error { public: using Error::Error; };

} // namespace sev
