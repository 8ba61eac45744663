#pragma once

#include <stdexcept>
#include <string>

namespace hecke {

// Invalid input: bad weight, non-fundamental discriminant, p | N, ...
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string &what) : std::domain_error(what) {}
};

// Malformed or insufficient external data (character files, eigenvalue files).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string &what) : std::runtime_error(what) {}
};

// An exact identity that must hold did not (non-integral trace, negative nu_m, ...).
class ConsistencyError : public std::logic_error {
public:
  explicit ConsistencyError(const std::string &what) : std::logic_error(what) {}
};

class ResourceError : public std::runtime_error {
public:
  explicit ResourceError(const std::string &what) : std::runtime_error(what) {}
};

class PrecisionError : public std::runtime_error {
public:
  explicit PrecisionError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace hecke
