#pragma once

#include <stdexcept>
#include <string>

namespace gridfuzz {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when every active rule of a FIS has zero firing strength.
/// The fallback policy is the caller's business, not the inference engine's.
class NoRuleFired : public Error {
 public:
  NoRuleFired() : Error("no rule fired: aggregate output set is empty") {}
};

/// Malformed membership function (parameter ordering or range violated).
class InvalidMf : public Error {
 public:
  explicit InvalidMf(const std::string& what) : Error(what) {}
};

/// Chromosome does not match the expected encoding geometry.
class CodecError : public Error {
 public:
  explicit CodecError(const std::string& what) : Error(what) {}
};

/// Genetic operator misuse (length mismatch, gene outside bounds).
class OperatorError : public Error {
 public:
  explicit OperatorError(const std::string& what) : Error(what) {}
};

/// GA run aborted (e.g. non-finite fitness).
class EvolutionError : public Error {
 public:
  explicit EvolutionError(const std::string& what) : Error(what) {}
};

/// Scenario ingestion / validation failure.
class IngestError : public Error {
 public:
  explicit IngestError(const std::string& what) : Error(what) {}
};

/// Battery model used outside its validity range.
class ModelRangeError : public Error {
 public:
  explicit ModelRangeError(const std::string& what) : Error(what) {}
};

}  // namespace gridfuzz
