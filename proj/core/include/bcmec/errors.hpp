#pragma once

#include <stdexcept>
#include <string>

namespace bcmec {

// Raised when a formula is evaluated outside its domain (non-positive
// capacity, relative power above one, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A joint action or sub-action violated one of the feasibility constraints.
// what() names the violated constraint.
class InfeasibleAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LedgerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownAccount : public LedgerError {
 public:
  using LedgerError::LedgerError;
};

class InsufficientBalance : public LedgerError {
 public:
  using LedgerError::LedgerError;
};

class ChainFormatError : public LedgerError {
 public:
  using LedgerError::LedgerError;
};

// Non-finite gradient or loss during training.
class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bcmec
