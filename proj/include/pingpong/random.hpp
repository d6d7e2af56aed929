// Copyright 2026 The pingpong-qsdc Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace pingpong {

/// Raised for malformed arguments: bad dimensions, unknown subsystem ids,
/// non-orthonormal bases, invalid strategy strings.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an eavesdropper tap breaks the channel contract, e.g. by
/// addressing Bob's home qubit.
class ContractViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Raised when an experiment would exceed its round-evaluation budget.
class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Seeded source of randomness shared by preparation, taps and measurement.
///
/// Draws are defined bit-exactly (mt19937_64 plus explicit conversions), so a
/// given seed reproduces the same sequence on every platform.
class RandomSource {
  public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Fair coin.
    bool coin() { return (engine_() >> 63) != 0; }

    std::uint64_t next() { return engine_(); }

    /// Independent stream for trial `index` of an experiment seeded with
    /// `master`. Uses two rounds of splitmix64 so neighbouring indices land
    /// far apart in seed space.
    static RandomSource derive(std::uint64_t master, std::uint64_t index);

  private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace pingpong
