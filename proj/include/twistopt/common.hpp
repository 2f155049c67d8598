// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistopt {

using Complex = std::complex<double>;
inline constexpr Complex kI{0.0, 1.0};

inline constexpr const char* kVersion = "0.1.0";

// Thrown when a requested simulation would exceed its memory budget, e.g. a
// tensor-network bond blowing up mid-circuit. The message names the stage
// that tripped the limit so callers can report it.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user-facing configuration (bad ansatz label, non-PSD noise, ...).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

enum class ParallelPolicy { kSerial, kOpenMP };

// Cartesian unit vector with the three axis specializations used by the gate
// set. Arbitrary directions are allowed where an operation accepts any axis.
struct Axis {
  double nx = 0.0, ny = 0.0, nz = 1.0;

  static constexpr Axis x() { return {1.0, 0.0, 0.0}; }
  static constexpr Axis y() { return {0.0, 1.0, 0.0}; }
  static constexpr Axis z() { return {0.0, 0.0, 1.0}; }
};

// Axis restricted to the coordinate directions; what gate descriptions store.
enum class AxisLabel : std::uint8_t { kX, kY, kZ };

inline Axis axis_vector(AxisLabel a) {
  switch (a) {
    case AxisLabel::kX: return Axis::x();
    case AxisLabel::kY: return Axis::y();
    default: return Axis::z();
  }
}

inline char axis_char(AxisLabel a) {
  switch (a) {
    case AxisLabel::kX: return 'x';
    case AxisLabel::kY: return 'y';
    default: return 'z';
  }
}

// Binomial coefficient table, exact in double for every entry that fits in
// 2^53 (true for all n used here). Row n has entries k = 0..n.
class BinomialTable {
 public:
  explicit BinomialTable(int max_n);
  double operator()(int n, int k) const {
    if (k < 0 || k > n) return 0.0;
    return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  }
  int max_n() const { return static_cast<int>(rows_.size()) - 1; }

 private:
  std::vector<std::vector<double>> rows_;
};

// Shared process-wide table, grown on demand. Thread-safe for concurrent
// readers once warmed; call with the largest n before entering parallel code.
double binomial(int n, int k);

// C(n + k - 1, k - 1): number of ways to write n as an ordered sum of k
// non-negative integers. k = 0 admits only n = 0.
double compositions(int n, int k);

// Format a double with enough digits to round-trip exactly ("%.17g").
std::string format_double(double v);

}  // namespace twistopt
