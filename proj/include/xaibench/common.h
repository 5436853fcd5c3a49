/*
 * Copyright 2026 The xai-bench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef XAIBENCH_COMMON_H_
#define XAIBENCH_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace xaibench {

// Dense types used across the library. Attribution vectors, probability rows
// and embedding slices are all plain double-precision Eigen objects.
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;

using TokenId = std::int64_t;
using TokenIds = std::vector<TokenId>;

// Error taxonomy. The CLI maps these onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags, unknown method names, invalid targets, missing model features
// required by a configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedCapabilityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Remote endpoint unreachable or failing after all retries.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Remote endpoint answered with a body that violates the wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (files, rationales, texts).
class DataError : public Error {
 public:
  using Error::Error;
};

class InvalidInputError : public DataError {
 public:
  using DataError::DataError;
};

class TruncationError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class ValidationError : public DataError {
 public:
  using DataError::DataError;
};

class AlignmentError : public DataError {
 public:
  using DataError::DataError;
};

// Non-finite values or ill-conditioned linear systems.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace xaibench

#endif  // XAIBENCH_COMMON_H_
