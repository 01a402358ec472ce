// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef HETSIM_COMMON_HPP
#define HETSIM_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace hetsim {

inline constexpr const char* kVersion = "hetsim 0.1.0";

// Links shorter than this are clamped before the pathloss evaluation.
inline constexpr double kMinLinkDistanceM = 10.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// Power units are mW network-wide; dBm only at I/O boundaries.
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

inline double log2_1p(double x) { return std::log1p(x) * 1.4426950408889634; }

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateInputError : public std::runtime_error {
 public:
  explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hetsim

#endif  // HETSIM_COMMON_HPP
