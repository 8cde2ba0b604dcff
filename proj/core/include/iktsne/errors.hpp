#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iktsne {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated precondition or invalid argument value.
class argument_error : public error {
public:
    using error::error;
};

// Malformed input file; carries the 1-based line (and column when known).
class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t line, std::size_t column = 0)
        : error(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// A conditional-probability row with no usable off-diagonal mass.
class degenerate_row_error : public error {
public:
    degenerate_row_error(const std::string& what, std::size_t point)
        : error(what), point_(point) {}

    std::size_t point() const noexcept { return point_; }

private:
    std::size_t point_;
};

// A point whose k-th nearest-neighbour distance is zero.
class degenerate_bandwidth_error : public error {
public:
    degenerate_bandwidth_error(const std::string& what, std::size_t point)
        : error(what), point_(point) {}

    std::size_t point() const noexcept { return point_; }

private:
    std::size_t point_;
};

// Optimizer produced non-finite coordinates.
class divergence_error : public error {
public:
    divergence_error(const std::string& what, std::size_t iteration)
        : error(what), iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

// I/O failure (unreadable or unwritable path).
class io_error : public error {
public:
    using error::error;
};

// Generator could not satisfy its output contract; retry with other settings.
class generation_error : public error {
public:
    using error::error;
};

}  // namespace iktsne
