#pragma once

#include <stdexcept>
#include <string>

namespace autoreason {

// Root of every error the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyQuestion : public Error {
public:
    EmptyQuestion() : Error("question is empty") {}
};

class EmptyTraces : public Error {
public:
    EmptyTraces() : Error("reasoning traces are empty") {}
};

class EmptyField : public Error {
public:
    explicit EmptyField(std::string field)
        : Error("field is empty: " + field), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class NoRationales : public Error {
public:
    NoRationales() : Error("no reasoning traces found in response") {}
};

class TemplateError : public Error {
public:
    using Error::Error;
};

class FileUnreadable : public Error {
public:
    explicit FileUnreadable(const std::string& path) : Error("cannot read file: " + path) {}
};

class SchemaViolation : public Error {
public:
    SchemaViolation(std::size_t index, std::string field, const std::string& what)
        : Error("schema violation at index " + std::to_string(index) + ", field '" + field +
                "': " + what),
          index_(index),
          field_(std::move(field)) {}
    std::size_t index() const { return index_; }
    const std::string& field() const { return field_; }

private:
    std::size_t index_;
    std::string field_;
};

class Unparseable : public Error {
public:
    explicit Unparseable(const std::string& raw) : Error("no answer token found in: " + raw) {}
};

class ScoreParseFailure : public Error {
public:
    explicit ScoreParseFailure(std::string judge_raw)
        : Error("no score in [0, 10] found in judge response"), judge_raw_(std::move(judge_raw)) {}
    const std::string& judge_raw() const { return judge_raw_; }

private:
    std::string judge_raw_;
};

class SampleTooLarge : public Error {
public:
    SampleTooLarge(std::size_t requested, std::size_t available)
        : Error("cannot sample " + std::to_string(requested) + " records from " +
                std::to_string(available)) {}
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class DigestMismatch : public Error {
public:
    using Error::Error;
};

class RecordNotFound : public Error {
public:
    explicit RecordNotFound(const std::string& id) : Error("record not found: " + id) {}
};

}  // namespace autoreason
