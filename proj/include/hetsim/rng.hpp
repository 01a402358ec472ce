// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef HETSIM_RNG_HPP
#define HETSIM_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace hetsim {

// splitmix64 finalizer, used to whiten counter-derived seeds.
std::uint64_t mix64(std::uint64_t x);

// Counter-based seed derivation: master seed -> per-stream -> per-substream.
// Stream ids identify a purpose (user drop, scheduling, Monte-Carlo trial, ...)
// so that the same trial is reproducible independent of worker count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t substream);

// Stream purpose tags used by the harness seed policy.
enum : std::uint64_t {
  kStreamUserDrop = 1,
  kStreamScheduling = 2,
  kStreamMonteCarlo = 3,
  kStreamNodePlacement = 4,
  kStreamRetryOffset = 0x4000000000000000ULL,
};

// Deterministic random source. Gaussians come from an explicit Box-Muller on
// top of mt19937_64, so sequences do not depend on the standard library's
// distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  Rng(std::uint64_t master, std::uint64_t stream, std::uint64_t substream)
      : gen_(derive_seed(master, stream, substream)) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double gauss();

  // Circularly-symmetric complex Gaussian CN(0, variance).
  std::complex<double> cgauss(double variance);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hetsim

#endif  // HETSIM_RNG_HPP
