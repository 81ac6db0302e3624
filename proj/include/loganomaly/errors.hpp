// Copyright 2025 loganomaly Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOGANOMALY_ERRORS_HPP
#define LOGANOMALY_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loganomaly {

// Base class for all errors raised by this library. User-facing failures
// (bad input files, invalid parameters) derive from this; anything else
// escaping the library is a bug.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FileNotFound : public Error {
public:
    using Error::Error;
};

class LabelIndexOutOfRange : public Error {
public:
    using Error::Error;
};

class EmptyCorpus : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class InvalidNu : public Error {
public:
    using Error::Error;
};

class InfeasibleBox : public Error {
public:
    using Error::Error;
};

// Solver hit its iteration cap before reaching the requested tolerance.
class DidNotConverge : public Error {
public:
    DidNotConverge(std::size_t iterations, double gap)
        : Error("solver did not converge after " + std::to_string(iterations) +
                " iterations (KKT gap " + std::to_string(gap) + ")"),
          iterations_(iterations),
          gap_(gap) {}

    std::size_t iterations() const { return iterations_; }
    double gap() const { return gap_; }

private:
    std::size_t iterations_;
    double gap_;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class UnlabeledCorpus : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class UnsupportedVersion : public Error {
public:
    using Error::Error;
};

class CorruptModel : public Error {
public:
    using Error::Error;
};

}  // namespace loganomaly

#endif  // LOGANOMALY_ERRORS_HPP
