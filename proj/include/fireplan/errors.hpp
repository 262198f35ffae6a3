#pragma once

#include <stdexcept>
#include <string>

namespace fireplan {

// Input failed structural or range validation. The message names the
// offending field (e.g. "targets[0].reward").
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No visible specular reflection exists for the given geometry.
class NoSpecularError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A request exceeds a configured resource guard (e.g. horizon cap).
class ResourceGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure inside an optimizer (iteration cap, stall). Never used
// to paper over a wrong answer: callers get this instead of bad numbers.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pipeline artifacts that do not belong together (digest mismatch,
// solution referencing unknown images, stale inputs).
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fireplan
