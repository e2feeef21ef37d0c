#pragma once

#include <stdexcept>
#include <string>

namespace fedjam {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside its mathematical domain (cell ids, fractions, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Matrix/vector dimensions disagree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Misuse of an API contract, e.g. a cache replayed against another model.
class ContractError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or truncated binary/text file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Non-finite loss or parameter encountered during training.
class NumericError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace fedjam
