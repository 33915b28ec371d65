#pragma once

#include <stdexcept>
#include <string>

namespace iotrisk {

// Base of all library errors. The three families below map onto the CLI's
// exit-code taxonomy: parse failures (2), validation failures (3) and
// computation failures (4).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* code() const noexcept { return "Error"; }
    virtual int exit_class() const noexcept { return 1; }
};

// -- parse family (exit 2) --------------------------------------------------

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, long line = -1)
        : Error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    const char* code() const noexcept override { return "ParseError"; }
    int exit_class() const noexcept override { return 2; }
    long line() const noexcept { return line_; }

private:
    long line_;
};

// -- validation family (exit 3) ----------------------------------------------

class ValidationError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "ValidationError"; }
    int exit_class() const noexcept override { return 3; }
};

class DanglingReferenceError : public ValidationError {
public:
    using ValidationError::ValidationError;
    const char* code() const noexcept override { return "DanglingReference"; }
};

class EmptyHistoryError : public ValidationError {
public:
    using ValidationError::ValidationError;
    const char* code() const noexcept override { return "EmptyHistory"; }
};

// -- computation family (exit 4) ---------------------------------------------

class ComputationError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "ComputationError"; }
    int exit_class() const noexcept override { return 4; }
};

class NoValuationError : public ComputationError {
public:
    explicit NoValuationError(const std::string& asset_id)
        : ComputationError("no valuation basis in policy is present on asset '" +
                           asset_id + "'"),
          asset_id_(asset_id) {}
    const char* code() const noexcept override { return "NoValuation"; }
    const std::string& asset_id() const noexcept { return asset_id_; }

private:
    std::string asset_id_;
};

class ZeroControlError : public ComputationError {
public:
    using ComputationError::ComputationError;
    const char* code() const noexcept override { return "ZeroControl"; }
};

class OutOfRangeError : public ComputationError {
public:
    using ComputationError::ComputationError;
    const char* code() const noexcept override { return "OutOfRange"; }
};

class TooManyAssetsError : public ComputationError {
public:
    using ComputationError::ComputationError;
    const char* code() const noexcept override { return "TooManyAssets"; }
};

class BadGridError : public ComputationError {
public:
    using ComputationError::ComputationError;
    const char* code() const noexcept override { return "BadGrid"; }
};

class WrongHorizonError : public ComputationError {
public:
    using ComputationError::ComputationError;
    const char* code() const noexcept override { return "WrongHorizon"; }
};

class IoError : public ComputationError {
public:
    using ComputationError::ComputationError;
    const char* code() const noexcept override { return "IoError"; }
};

}  // namespace iotrisk
