#pragma once

#include <stdexcept>
#include <string>

namespace ivexpand {

// Bad caller input: non-finite reals, dimension mismatch, empty lists.
class invalid_argument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of ln/sqrt.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, int line, int column)
        : std::runtime_error(what + " at line " + std::to_string(line) + ", column " +
                             std::to_string(column)),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

// Base for failures of a mathematical precondition (exit code 3 in the CLI).
class math_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class derivative_undefined : public math_error {
public:
    using math_error::math_error;
};

class hessian_undefined : public math_error {
public:
    using math_error::math_error;
};

class hypothesis_violated : public math_error {
public:
    using math_error::math_error;
};

class precondition_violated : public math_error {
public:
    using math_error::math_error;
};

} // namespace ivexpand
