// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace mqag {

/// Root of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (bad argument, length mismatch,
/// empty input where one is required).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Backend errors
// ---------------------------------------------------------------------------

class BackendError : public Error {
 public:
  using Error::Error;
};

/// The backend could not be reached after all retries.
class BackendUnavailable : public BackendError {
 public:
  using BackendError::BackendError;
};

/// Connection-level failure (refused, reset, DNS, 5xx after retries).
class TransportError : public BackendUnavailable {
 public:
  using BackendUnavailable::BackendUnavailable;
};

/// The request exceeded its deadline.
class TimeoutError : public BackendUnavailable {
 public:
  using BackendUnavailable::BackendUnavailable;
};

/// The backend answered with a 4xx status and an {"error": ...} body.
class RequestRejected : public BackendError {
 public:
  RequestRejected(int status, std::string message)
      : BackendError("backend rejected request (HTTP " + std::to_string(status) +
                     "): " + message),
        status_(status),
        server_message_(std::move(message)) {}

  int status() const noexcept { return status_; }
  const std::string& server_message() const noexcept { return server_message_; }

 private:
  int status_;
  std::string server_message_;
};

/// The backend returned something that does not satisfy the wire contract.
/// Carries the raw payload for diagnostics.
class ProtocolError : public BackendError {
 public:
  ProtocolError(const std::string& what, std::string payload)
      : BackendError(what), payload_(std::move(payload)) {}

  const std::string& payload() const noexcept { return payload_; }

 private:
  std::string payload_;
};

/// Payload is not valid JSON or lacks a required field / has a wrong type.
class DecodeError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

/// Payload decoded but its content violates a domain invariant
/// (probabilities not summing to one, wrong option count, ...).
class ValidationError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

/// Mock generation cannot build K distinct options from the context.
class InsufficientContentError : public BackendError {
 public:
  using BackendError::BackendError;
};

// ---------------------------------------------------------------------------
// Data / harness errors
// ---------------------------------------------------------------------------

class DataError : public Error {
 public:
  using Error::Error;
};

class EmptyDatasetError : public DataError {
 public:
  using DataError::DataError;
};

/// Malformed line in a record file. line() is 1-based.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A record is missing a field or has a field of the wrong type.
class SchemaError : public DataError {
 public:
  SchemaError(std::size_t line, std::string field, const std::string& what)
      : DataError("line " + std::to_string(line) + ": field '" + field + "': " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Score tables do not have the shape a correlation requires.
class ShapeError : public DataError {
 public:
  using DataError::DataError;
};

/// Pearson/Spearman is undefined (zero variance, too few points, or every
/// group skipped).
class UndefinedCorrelation : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace mqag
