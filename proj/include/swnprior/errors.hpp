/*
 * Copyright (c) 2026, the swnprior authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SWNPRIOR_ERRORS_HPP
#define SWNPRIOR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace swnprior {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable stream or filesystem failure.
struct IoError : Error {
    using Error::Error;
};

/// Malformed or empty input resource (bad header, no usable rows, corrupt report).
struct FormatError : Error {
    using Error::Error;
};

/// A value outside the operation's mathematical domain (empty score lists,
/// mismatched lengths, ratings off the 1-9 scale, degenerate labels).
struct DomainError : Error {
    using Error::Error;
};

/// Inconsistent or incomplete configuration (missing rng, variant misuse,
/// schema mismatch, bad hyperparameter ranges).
struct ConfigError : Error {
    using Error::Error;
};

/// Numerical solver failure (singular system, non-convergence).
struct SolverError : Error {
    using Error::Error;
};

} // namespace swnprior

#endif
