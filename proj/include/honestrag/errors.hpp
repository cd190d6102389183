#pragma once

#include <stdexcept>
#include <string>

namespace honestrag {

/// Base class for all honest-rag errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- dataset loading --------------------------------------------------

class DatasetError : public Error {
public:
    DatasetError(const std::string& message, int line_no)
        : Error(message), line_no_(line_no) {}
    int line_no() const noexcept { return line_no_; }

private:
    int line_no_;
};

class MalformedLine : public DatasetError {
public:
    MalformedLine(int line_no, const std::string& detail)
        : DatasetError("line " + std::to_string(line_no) + ": " + detail, line_no) {}
};

class MissingField : public DatasetError {
public:
    MissingField(int line_no, std::string field)
        : DatasetError("line " + std::to_string(line_no) + ": missing field \"" + field + "\"",
                       line_no),
          field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class UnknownEnumValue : public DatasetError {
public:
    UnknownEnumValue(int line_no, std::string field, std::string value)
        : DatasetError("line " + std::to_string(line_no) + ": unknown " + field + " value \"" +
                           value + "\"",
                       line_no),
          field_(std::move(field)),
          value_(std::move(value)) {}
    const std::string& field() const noexcept { return field_; }
    const std::string& value() const noexcept { return value_; }

private:
    std::string field_;
    std::string value_;
};

// ---- embedding ---------------------------------------------------------

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class ZeroVector : public Error {
public:
    using Error::Error;
};

class ProviderFailure : public Error {
public:
    using Error::Error;
};

// ---- model gateway -----------------------------------------------------

/// Umbrella for everything the pipeline treats as a JSON processing error.
class ExtractionError : public Error {
public:
    using Error::Error;
};

class NoObjectFound : public ExtractionError {
public:
    using ExtractionError::ExtractionError;
};

class ParseFailure : public ExtractionError {
public:
    using ExtractionError::ExtractionError;
};

class SchemaFailure : public ExtractionError {
public:
    using ExtractionError::ExtractionError;
};

/// A chat backend failed after its retry budget was spent.
class BackendFailure : public Error {
public:
    using Error::Error;
};

// ---- dataset preparation / io -------------------------------------------

class InsufficientRecords : public Error {
public:
    using Error::Error;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

// ---- scoring -------------------------------------------------------------

class EmptyBatch : public Error {
public:
    using Error::Error;
};

// ---- configuration --------------------------------------------------------

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace honestrag
