#pragma once

#include <stdexcept>
#include <string>

namespace risfd {

/// Shape disagreement between operands. Never silently broadcast.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the operation's domain (negative variance, d below the
/// reference distance, negative SINR, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Regularized system is (potentially) rank deficient.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

/// A link configuration that makes the MMSE weight undefined.
class DegenerateLinkError : public std::runtime_error {
public:
    explicit DegenerateLinkError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative routine failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Caller broke an API contract (stale tape, mismatched records, ...).
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// Filesystem failure, annotated with the offending path.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(what + ": " + path) {}
};

}  // namespace risfd
