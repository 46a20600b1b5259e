#pragma once

#include <stdexcept>
#include <string>

namespace occu {

/// Base of every error raised by the library. The category maps onto the
/// CLI exit code (usage 1, data 2, numerical 3).
class Error : public std::runtime_error {
public:
    enum class Category { Usage = 1, Data = 2, Numerical = 3 };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    Category category_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(Category::Usage, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(Category::Data, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(Category::Numerical, what) {}
};

/// Malformed input line. Line numbers are 1-based.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& reason)
        : DataError("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

}  // namespace occu
