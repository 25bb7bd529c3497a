#pragma once

#include <stdexcept>
#include <string>

namespace proxplast {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Problems with user-supplied input: model files, schemas, inconsistent
/// or physically invalid model data.
struct InputError : Error {
    using Error::Error;
};

} // namespace proxplast
