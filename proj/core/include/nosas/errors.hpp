#pragma once

#include <stdexcept>
#include <string>

namespace nosas {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: sizes, pattern geometry, options.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

// Numerical failures.
class NotSpd : public Error {
public:
    NotSpd(const std::string& what, long pivot) : Error(what), pivot_(pivot) {}
    long pivot() const { return pivot_; }

private:
    long pivot_;
};

class NumericalBreakdown : public Error {
public:
    using Error::Error;
};

class Divergence : public Error {
public:
    using Error::Error;
};

inline bool is_numerical(const std::exception& e)
{
    return dynamic_cast<const NotSpd*>(&e) || dynamic_cast<const NumericalBreakdown*>(&e) ||
           dynamic_cast<const Divergence*>(&e);
}

} // namespace nosas
