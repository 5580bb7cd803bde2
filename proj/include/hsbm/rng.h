// Copyright 2026 The HSBM Toolkit Authors.
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

// Seed derivation. One master seed fans out into independent streams so that,
// for example, turning on topological noise leaves labels and features intact.

#ifndef HSBM_RNG_H_
#define HSBM_RNG_H_

#include <cstdint>
#include <random>

namespace hsbm {

using Rng = std::mt19937_64;

enum class Stream : uint64_t {
  kLabels = 1,
  kEdges = 2,
  kFeatures = 3,
  kNoise = 4,
  kSplit = 5,
  kInit = 6,
  kDropout = 7,
  kMonteCarlo = 8,
};

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// `index` selects a substream (e.g. a node row) inside a stream.
inline uint64_t DeriveSeed(uint64_t master, Stream stream, uint64_t index = 0) {
  uint64_t s = SplitMix64(master);
  s = SplitMix64(s ^ static_cast<uint64_t>(stream));
  return SplitMix64(s ^ SplitMix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng MakeRng(uint64_t master, Stream stream, uint64_t index = 0) {
  return Rng(DeriveSeed(master, stream, index));
}

}  // namespace hsbm

#endif  // HSBM_RNG_H_
