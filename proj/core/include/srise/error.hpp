#pragma once

#include <stdexcept>
#include <string>

namespace srise {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent configuration (bad parameter, malformed config file).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A file could not be read or decoded as an image.
class DecodeError : public Error {
public:
    using Error::Error;
};

/// Shapes of two operands do not match.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid input to an operation (missing file, empty dataset, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// The inference backend failed to load or run a model.
class InferenceError : public Error {
public:
    using Error::Error;
};

/// An embedding had near-zero norm and cannot be used in a similarity.
class DegenerateEmbeddingError : public Error {
public:
    using Error::Error;
};

/// A saliency map was constant where a non-constant map is required.
class DegenerateMapError : public Error {
public:
    using Error::Error;
};

} // namespace srise
