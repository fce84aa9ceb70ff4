#pragma once

#include <stdexcept>
#include <string>

namespace btp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in feature spaces of different dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid population, scheme or experiment parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A sampling oracle ran out of queries.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// User index outside the population.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation precondition (empty Lambda, wrong view, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// An exact computation was requested outside the enumerable range.
class ModeError : public Error {
 public:
  using Error::Error;
};

/// An adversary broke the game protocol (e.g. returned a non-bit).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// A statistic is undefined for the given input (e.g. variation coefficient at mean 0).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

}  // namespace btp
