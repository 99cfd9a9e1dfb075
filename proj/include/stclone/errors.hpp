#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stclone {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyCorpus : public Error {
public:
    EmptyCorpus() : Error("corpus has no significant lines") {}
};

class UnknownLabel : public Error {
public:
    explicit UnknownLabel(std::string label)
        : Error("unknown Likert label: '" + label + "'"), label_(std::move(label)) {}
    const std::string& label() const { return label_; }

private:
    std::string label_;
};

class IncompleteSheet : public Error {
public:
    using Cell = std::pair<std::string, std::string>;  // (clone, rater)

    explicit IncompleteSheet(std::vector<Cell> missing);
    const std::vector<Cell>& missing() const { return missing_; }

private:
    std::vector<Cell> missing_;
};

class DegenerateData : public Error {
public:
    using Error::Error;
};

class EmptyGroup : public Error {
public:
    EmptyGroup() : Error("group summary requested for an empty group") {}
};

class MissingDetection : public Error {
public:
    using Error::Error;
};

class CsvSchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace stclone
