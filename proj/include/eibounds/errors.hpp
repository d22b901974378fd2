#pragma once

#include <stdexcept>
#include <string>

namespace eib {

// Bad inputs: violated preconditions, out-of-range fields, unparseable rows.
// The CLI maps this to exit code 1.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem/stream failures. The CLI maps this to exit code 2.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eib
