// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace kakeya {

// Bad arguments: malformed text, values out of range, violated preconditions.
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A configured enumeration or search limit would be exceeded.
class cap_exceeded : public std::runtime_error {
public:
    cap_exceeded(const std::string& what_arg, double requested, double cap)
        : std::runtime_error(what_arg), requested_(requested), cap_(cap) {}

    double requested() const noexcept { return requested_; }
    double cap() const noexcept { return cap_; }

private:
    double requested_;
    double cap_;
};

} // namespace kakeya
