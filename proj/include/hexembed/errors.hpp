// Copyright 2026 The hexembed authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hexembed {

/// Base class of all toolkit errors. Subclasses map onto CLI exit codes:
/// InputError -> 1, DataError -> 2, NumericalError -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid arguments, configuration, or out-of-domain values.
struct InputError : Error {
    using Error::Error;
};

/// Vector/matrix dimension mismatches.
struct ShapeError : InputError {
    using InputError::InputError;
};

/// Problems with input data content (malformed records, empty matrices,
/// unknown region ids, impossible sampling requests).
struct DataError : Error {
    using Error::Error;
};

/// Malformed record in a byte stream; carries the 1-based line number.
struct ParseError : DataError {
    ParseError(const std::string& msg, std::size_t line)
        : DataError("line " + std::to_string(line) + ": " + msg), line_number(line) {}
    std::size_t line_number;
};

/// Region id not present in the dataset at hand.
struct LookupError : DataError {
    using DataError::DataError;
};

/// No candidate regions available for a negative draw.
struct SamplingError : DataError {
    using DataError::DataError;
};

/// Numerical failures: divergence, undefined measures.
struct NumericalError : Error {
    using Error::Error;
};

/// Cosine of a zero vector and similar undefined quantities.
struct UndefinedMeasureError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace hexembed
