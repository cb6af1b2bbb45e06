#pragma once

#include <stdexcept>
#include <string>

namespace iset {

// Invalid user input (bad file, malformed graph, out-of-range id). CLI exit 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Instance exceeds a configured size cap. CLI exit 3.
class SizeCapError : public std::runtime_error {
public:
    explicit SizeCapError(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariant; always a bug. CLI exit 4.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void internal_check(bool ok, const char* msg) {
    if (!ok) throw InternalError(msg);
}

} // namespace iset
