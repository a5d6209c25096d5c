// Copyright 2026 The qttt Authors
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

namespace qttt {

// Every stochastic component takes one of these explicitly so that runs are
// reproducible from a single seed.
using Rng = std::mt19937_64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QTTT_DEFINE_ERROR(Name) \
  class Name : public Error {   \
   public:                      \
    using Error::Error;         \
  }

// game
QTTT_DEFINE_ERROR(IllegalMove);
QTTT_DEFINE_ERROR(NoLegalMoves);
// nn
QTTT_DEFINE_ERROR(ShapeMismatch);
// qsim
QTTT_DEFINE_ERROR(UnboundSymbol);
QTTT_DEFINE_ERROR(QubitOutOfRange);
QTTT_DEFINE_ERROR(UnsupportedGateForShift);
// circuits
QTTT_DEFINE_ERROR(UnsupportedWidth);
QTTT_DEFINE_ERROR(UnknownCircuitKind);
// engines
QTTT_DEFINE_ERROR(InvalidSpec);
QTTT_DEFINE_ERROR(CorruptCheckpoint);
QTTT_DEFINE_ERROR(SpecMismatch);
// channel
QTTT_DEFINE_ERROR(NoQuantumLayer);
// harness / service
QTTT_DEFINE_ERROR(ConfigError);
QTTT_DEFINE_ERROR(IoError);
QTTT_DEFINE_ERROR(MissingData);
QTTT_DEFINE_ERROR(PortInUse);
QTTT_DEFINE_ERROR(NoCheckpoints);

#undef QTTT_DEFINE_ERROR

// Derives an independent stream seed from a base seed and a stream label,
// so that e.g. training and evaluation never share random draws.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace qttt
