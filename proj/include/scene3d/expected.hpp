#pragma once

#include <cassert>
#include <string>
#include <utility>
#include <variant>

namespace scene3d {

// Data-level failures (malformed files, bad model output) are reported as
// values so that evaluation runs never abort mid-corpus. Contract violations
// (non-finite angles, empty inputs where the API forbids them) throw
// std::invalid_argument instead.
struct Error {
    std::string message;
};

template <typename T>
class Expected {
public:
    Expected(T value) : v_(std::move(value)) {}
    Expected(Error err) : v_(std::move(err)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    T& value() {
        assert(ok());
        return std::get<T>(v_);
    }
    const T& value() const {
        assert(ok());
        return std::get<T>(v_);
    }
    const std::string& error() const {
        assert(!ok());
        return std::get<Error>(v_).message;
    }

private:
    std::variant<T, Error> v_;
};

inline Error Unexpected(std::string message) { return Error{std::move(message)}; }

}  // namespace scene3d
