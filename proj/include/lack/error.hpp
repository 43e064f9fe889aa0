#pragma once

#include <stdexcept>
#include <string>

namespace lack {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: shape mismatches, bad parameters, violated invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A class has no member where the centroid solve needs one.
class DegenerateClassError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Missing, unreadable or unwritable files.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace lack
