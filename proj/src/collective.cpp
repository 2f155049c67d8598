// SPDX-License-Identifier: MIT
#include "twistopt/collective.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>

namespace twistopt {

BinomialTable::BinomialTable(int max_n) {
  rows_.resize(static_cast<std::size_t>(max_n) + 1);
  for (int n = 0; n <= max_n; ++n) {
    auto& row = rows_[static_cast<std::size_t>(n)];
    row.resize(static_cast<std::size_t>(n) + 1, 1.0);
    for (int k = 1; k < n; ++k)
      row[static_cast<std::size_t>(k)] =
          rows_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] +
          rows_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)];
  }
}

namespace {
std::mutex g_binom_mutex;
std::atomic<const BinomialTable*> g_binom{nullptr};
}  // namespace

double binomial(int n, int k) {
  if (n < 0) return 0.0;
  if (k < 0 || k > n) return 0.0;
  const BinomialTable* table = g_binom.load(std::memory_order_acquire);
  if (table == nullptr || table->max_n() < n) {
    std::lock_guard<std::mutex> lock(g_binom_mutex);
    table = g_binom.load(std::memory_order_relaxed);
    if (table == nullptr || table->max_n() < n) {
      int grow = std::max(n, table ? 2 * table->max_n() : 64);
      auto* fresh = new BinomialTable(grow);
      // Outgrown tables stay allocated: concurrent readers may still hold
      // them, and geometric growth bounds the total footprint.
      g_binom.store(fresh, std::memory_order_release);
      table = fresh;
    }
  }
  return (*table)(n, k);
}

double compositions(int n, int k) {
  if (k == 0) return n == 0 ? 1.0 : 0.0;
  return binomial(n + k - 1, k - 1);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

}  // namespace twistopt

namespace twistopt::collective {

double jz_eigenvalue(int n_qubits, int w) {
  return 0.5 * (n_qubits - 2 * w);
}

Matrix op_jz(int n_qubits) {
  Matrix m = Matrix::Zero(n_qubits + 1, n_qubits + 1);
  for (int w = 0; w <= n_qubits; ++w) m(w, w) = jz_eigenvalue(n_qubits, w);
  return m;
}

namespace {

// Ladder factor <w-1| J_+ |w> in the weight basis. With j = n/2 and
// m = (n-2w)/2, raising m by one lowers w by one and carries
// sqrt(j(j+1) - m(m+1)) = sqrt((n-w+1) w).
double ladder_up(int n_qubits, int w) {
  return std::sqrt(static_cast<double>(w) * (n_qubits - w + 1));
}

}  // namespace

Matrix op_jx(int n_qubits) {
  Matrix m = Matrix::Zero(n_qubits + 1, n_qubits + 1);
  for (int w = 1; w <= n_qubits; ++w) {
    double c = 0.5 * ladder_up(n_qubits, w);
    m(w - 1, w) = c;
    m(w, w - 1) = c;
  }
  return m;
}

Matrix op_jy(int n_qubits) {
  Matrix m = Matrix::Zero(n_qubits + 1, n_qubits + 1);
  for (int w = 1; w <= n_qubits; ++w) {
    double c = 0.5 * ladder_up(n_qubits, w);
    m(w - 1, w) = Complex(0.0, -1.0) * c;
    m(w, w - 1) = Complex(0.0, 1.0) * c;
  }
  return m;
}

Matrix op_axis(int n_qubits, const Axis& axis) {
  return axis.nx * op_jx(n_qubits) + axis.ny * op_jy(n_qubits) +
         axis.nz * op_jz(n_qubits);
}

DickeState coherent_plus(int n_qubits) {
  DickeState s;
  s.n_qubits = n_qubits;
  s.amp.resize(n_qubits + 1);
  double norm = std::pow(2.0, -0.5 * n_qubits);
  for (int w = 0; w <= n_qubits; ++w)
    s.amp(w) = norm * std::sqrt(binomial(n_qubits, w));
  return s;
}

namespace {

struct EigenBasis {
  Eigen::VectorXd values;
  Matrix vectors;  // columns are eigenvectors
};

// Cached eigendecompositions of J_x and J_y per size. Lookups take a mutex;
// entries are immutable once built and std::map never relocates mapped
// values, so returned references stay valid indefinitely.
std::mutex g_basis_mutex;
std::map<std::pair<int, int>, EigenBasis> g_bases;

const EigenBasis& basis_for(int n_qubits, AxisLabel axis) {
  std::pair<int, int> key{n_qubits, static_cast<int>(axis)};
  std::lock_guard<std::mutex> lock(g_basis_mutex);
  auto it = g_bases.find(key);
  if (it == g_bases.end()) {
    Matrix gen = axis == AxisLabel::kX ? op_jx(n_qubits) : op_jy(n_qubits);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gen);
    EigenBasis basis;
    basis.values = solver.eigenvalues();
    basis.vectors = solver.eigenvectors();
    it = g_bases.emplace(key, std::move(basis)).first;
  }
  return it->second;
}

Vector phase_vector(const Eigen::VectorXd& values, double theta, bool squared) {
  Vector out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    double lam = values(i);
    double arg = squared ? -theta * lam * lam : -theta * lam;
    out(i) = std::polar(1.0, arg);
  }
  return out;
}

}  // namespace

void warm_caches(int n_qubits) {
  basis_for(n_qubits, AxisLabel::kX);
  basis_for(n_qubits, AxisLabel::kY);
  binomial(2 * n_qubits + 8, 0);
}

Matrix rotation(int n_qubits, const Axis& axis, double theta) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op_axis(n_qubits, axis));
  Vector ph = phase_vector(solver.eigenvalues(), theta, false);
  return solver.eigenvectors() * ph.asDiagonal() *
         solver.eigenvectors().adjoint();
}

Matrix twist(int n_qubits, const Axis& axis, double theta) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op_axis(n_qubits, axis));
  Vector ph = phase_vector(solver.eigenvalues(), theta, true);
  return solver.eigenvectors() * ph.asDiagonal() *
         solver.eigenvectors().adjoint();
}

namespace {

void apply_in_eigenbasis(DickeState& state, AxisLabel axis, double theta,
                         bool squared) {
  if (axis == AxisLabel::kZ) {
    for (int w = 0; w <= state.n_qubits; ++w) {
      double lam = jz_eigenvalue(state.n_qubits, w);
      double arg = squared ? -theta * lam * lam : -theta * lam;
      state.amp(w) *= std::polar(1.0, arg);
    }
    return;
  }
  const EigenBasis& basis = basis_for(state.n_qubits, axis);
  Vector coeff = basis.vectors.adjoint() * state.amp;
  coeff.array() *= phase_vector(basis.values, theta, squared).array();
  state.amp = basis.vectors * coeff;
}

}  // namespace

void apply_rotation(DickeState& state, AxisLabel axis, double theta) {
  apply_in_eigenbasis(state, axis, theta, false);
}

void apply_twist(DickeState& state, AxisLabel axis, double theta) {
  apply_in_eigenbasis(state, axis, theta, true);
}

void apply_phase(DickeState& state, double phi) {
  apply_rotation(state, AxisLabel::kZ, phi);
}

std::vector<double> weight_distribution(const DickeState& state) {
  std::vector<double> p(static_cast<std::size_t>(state.n_qubits) + 1);
  for (int w = 0; w <= state.n_qubits; ++w)
    p[static_cast<std::size_t>(w)] = std::norm(state.amp(w));
  return p;
}

JzMoments jz_moments(const DickeState& state) {
  JzMoments m;
  for (int w = 0; w <= state.n_qubits; ++w) {
    double lam = jz_eigenvalue(state.n_qubits, w);
    double p = std::norm(state.amp(w));
    m.first += p * lam;
    m.second += p * lam * lam;
  }
  return m;
}

}  // namespace twistopt::collective
