#pragma once

#include <stdexcept>
#include <string>

namespace citenet {

// Base of every error the toolkit raises on purpose. The CLI maps each
// subclass to its own exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyNetwork : public Error {
public:
    using Error::Error;
};

class DegenerateInput : public Error {
public:
    using Error::Error;
};

class InvalidPartition : public Error {
public:
    using Error::Error;
};

class EmptyIntersection : public Error {
public:
    using Error::Error;
};

class GenerationFailure : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace citenet
