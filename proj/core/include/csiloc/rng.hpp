// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#pragma once

#include <cstdint>
#include <random>

namespace csiloc {

// splitmix64 finalizer; used to decorrelate (seed, index) pairs into
// independent engine seeds so parallel generation is schedule-independent.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic substream for one work item. Two distinct (seed, index)
/// pairs give statistically independent engines.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 engine(mix64(mix64(seed) ^ mix64(index + 0x5851f42d4c957f2dULL)));
    return engine;
}

}  // namespace csiloc
