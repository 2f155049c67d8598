// SPDX-License-Identifier: MIT
#include "twistopt/pinv.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace twistopt::pinv {

int type_count(int n_qubits) {
  return static_cast<int>(binomial(n_qubits + 3, 3));
}

int type_rank(const TypeVector& t) {
  int s = t.norm();
  int base = static_cast<int>(binomial(s + 2, 3));
  int q = s - t.t01;
  return base + q * (q + 1) / 2 + (q - t.t10);
}

namespace {

// Enumeration of qubit-operator types in canonical order, grown on demand.
std::mutex g_types_mutex;
std::vector<TypeVector> g_types;

// Append every type with from_norm <= norm <= to_norm in canonical rank
// order (increasing norm, then decreasing t01, then decreasing t10).
void append_types(std::vector<TypeVector>& out, int from_norm, int to_norm) {
  for (int s = from_norm; s <= to_norm; ++s)
    for (int a = s; a >= 0; --a)
      for (int b = s - a; b >= 0; --b) out.push_back({a, b, s - a - b});
}

void grow_types(int max_norm) {
  std::lock_guard<std::mutex> lock(g_types_mutex);
  int have = g_types.empty() ? -1 : g_types.back().norm();
  append_types(g_types, have + 1, max_norm);
}

// Private copy of the enumeration, indexed by rank, so hot loops iterate
// types without touching shared state.
std::vector<TypeVector> local_types(int max_norm) {
  std::vector<TypeVector> out;
  out.reserve(static_cast<std::size_t>(type_count(max_norm)));
  append_types(out, 0, max_norm);
  return out;
}

// offsets[s] = rank of the first type with norm s. The rank of a type
// (t01, t10, t11) of norm s is then offsets[s] + q(q+1)/2 + (q - t10) with
// q = s - t01, matching type_rank without the shared binomial table.
std::vector<int> shell_offsets(int max_norm) {
  std::vector<int> out(static_cast<std::size_t>(max_norm) + 1);
  for (int s = 0; s <= max_norm; ++s)
    out[static_cast<std::size_t>(s)] = static_cast<int>(binomial(s + 2, 3));
  return out;
}

// Pascal triangle rows 0..max_n; row m holds C(m, k) for k = 0..m.
std::vector<std::vector<double>> pascal_rows(int max_n) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(max_n) + 1);
  for (int m = 0; m <= max_n; ++m) {
    auto& row = rows[static_cast<std::size_t>(m)];
    row.assign(static_cast<std::size_t>(m) + 1, 1.0);
    for (int k = 1; k < m; ++k)
      row[static_cast<std::size_t>(k)] =
          rows[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(k - 1)] +
          rows[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(k)];
  }
  return rows;
}

}  // namespace

TypeVector type_at(int rank) {
  {
    std::lock_guard<std::mutex> lock(g_types_mutex);
    if (rank < static_cast<int>(g_types.size())) return g_types[static_cast<std::size_t>(rank)];
  }
  int norm = 0;
  while (binomial(norm + 3, 3) <= rank) ++norm;
  grow_types(norm);
  std::lock_guard<std::mutex> lock(g_types_mutex);
  return g_types[static_cast<std::size_t>(rank)];
}

double type_multiplicity(int n_qubits, const TypeVector& t) {
  int t00 = n_qubits - t.norm();
  if (t00 < 0) return 0.0;
  // Product of exact binomials; every partial product is an integer.
  return binomial(n_qubits, t.t01) * binomial(n_qubits - t.t01, t.t10) *
         binomial(n_qubits - t.t01 - t.t10, t.t11);
}

PermInvOperator zero_op(int n_qubits) {
  PermInvOperator a;
  a.n_qubits = n_qubits;
  a.coeff.assign(static_cast<std::size_t>(type_count(n_qubits)),
                 Complex{0.0, 0.0});
  return a;
}

PermInvOperator identity_op(int n_qubits) {
  PermInvOperator a = zero_op(n_qubits);
  for (int w = 0; w <= n_qubits; ++w) a.slot({0, 0, w}) = 1.0;
  return a;
}

namespace {

Complex ipow(Complex base, int e) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

PermInvOperator from_single_qubit(int n_qubits, const Eigen::Matrix2cd& u) {
  PermInvOperator a = zero_op(n_qubits);
  const int count = type_count(n_qubits);
  const std::vector<TypeVector> types = local_types(n_qubits);
  for (int r = 0; r < count; ++r) {
    const TypeVector& t = types[static_cast<std::size_t>(r)];
    int t00 = n_qubits - t.norm();
    a.coeff[static_cast<std::size_t>(r)] = ipow(u(0, 0), t00) *
                                           ipow(u(0, 1), t.t01) *
                                           ipow(u(1, 0), t.t10) *
                                           ipow(u(1, 1), t.t11);
  }
  return a;
}

PermInvOperator rotation_op(int n_qubits, const Axis& axis, double theta) {
  return from_single_qubit(n_qubits, tensornet::qubit_rotation(axis, theta));
}

PermInvOperator twist_z_op(int n_qubits, double theta) {
  PermInvOperator a = zero_op(n_qubits);
  for (int w = 0; w <= n_qubits; ++w) {
    double m = 0.5 * (n_qubits - 2 * w);
    a.slot({0, 0, w}) = std::polar(1.0, -theta * m * m);
  }
  return a;
}

PermInvOperator jz_op(int n_qubits) {
  PermInvOperator a = zero_op(n_qubits);
  for (int w = 0; w <= n_qubits; ++w)
    a.slot({0, 0, w}) = 0.5 * (n_qubits - 2 * w);
  return a;
}

PermInvOperator jz2_op(int n_qubits) {
  PermInvOperator a = zero_op(n_qubits);
  for (int w = 0; w <= n_qubits; ++w) {
    double m = 0.5 * (n_qubits - 2 * w);
    a.slot({0, 0, w}) = m * m;
  }
  return a;
}

PermInvOperator plus_density(int n_qubits) {
  PermInvOperator a = zero_op(n_qubits);
  double v = std::pow(2.0, -n_qubits);
  for (auto& c : a.coeff) c = v;
  return a;
}

PermInvOperator gate_to_pinv(int n_qubits, circuits::GateKind kind,
                             AxisLabel axis, double theta,
                             ParallelPolicy policy) {
  if (kind == circuits::GateKind::kRotation)
    return rotation_op(n_qubits, axis_vector(axis), theta);
  if (axis == AxisLabel::kZ) return twist_z_op(n_qubits, theta);
  // Transverse twist: conjugate the z twist into the requested frame.
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  PermInvOperator v = axis == AxisLabel::kX
                          ? rotation_op(n_qubits, Axis::y(), kHalfPi)
                          : rotation_op(n_qubits, Axis::x(), -kHalfPi);
  PermInvOperator core = twist_z_op(n_qubits, theta);
  return multiply(multiply(v, core, policy), dagger(v), policy);
}

PermInvOperator dagger(const PermInvOperator& a) {
  PermInvOperator out = zero_op(a.n_qubits);
  const int count = type_count(a.n_qubits);
  const std::vector<TypeVector> types = local_types(a.n_qubits);
  const std::vector<int> shell = shell_offsets(a.n_qubits);
  for (int r = 0; r < count; ++r) {
    const TypeVector& t = types[static_cast<std::size_t>(r)];
    const int s = t.norm();
    const int q = s - t.t10;  // transposed type swaps t01 and t10
    const int tr = shell[static_cast<std::size_t>(s)] + q * (q + 1) / 2 +
                   (q - t.t01);
    out.coeff[static_cast<std::size_t>(r)] =
        std::conj(a.coeff[static_cast<std::size_t>(tr)]);
  }
  return out;
}

PermInvOperator multiply(const PermInvOperator& a, const PermInvOperator& b,
                         ParallelPolicy policy) {
  if (a.n_qubits != b.n_qubits)
    throw ConfigError("operator size mismatch in multiply");
  const int n = a.n_qubits;
  PermInvOperator out = zero_op(n);
  const int count = type_count(n);
  const std::vector<TypeVector> types = local_types(n);
  const std::vector<int> shell = shell_offsets(n);
  const std::vector<std::vector<double>> pascal = pascal_rows(n);
  const Complex* pa = a.coeff.data();
  const Complex* pb = b.coeff.data();
  const int* sh = shell.data();
  auto rank_of = [sh](int c01, int c10, int s) {
    int q = s - c01;
    return sh[s] + q * (q + 1) / 2 + (q - c10);
  };

  // Each output coefficient sums over the four overlap counts that classify
  // how bra letters of the left factor line up with ket letters of the right
  // factor. Every overlap choice keeps both factor types within norm n, so
  // the ranks index the coefficient arrays directly.
#pragma omp parallel for schedule(dynamic, 16) if (policy == ParallelPolicy::kOpenMP)
  for (int r = 0; r < count; ++r) {
    const TypeVector t = types[static_cast<std::size_t>(r)];
    const int t00 = n - t.norm();
    const double* row00 = pascal[static_cast<std::size_t>(t00)].data();
    const double* row11 = pascal[static_cast<std::size_t>(t.t11)].data();
    const double* row01 = pascal[static_cast<std::size_t>(t.t01)].data();
    const double* row10 = pascal[static_cast<std::size_t>(t.t10)].data();
    Complex acc{0.0, 0.0};
    for (int alpha = 0; alpha <= t00; ++alpha) {
      const double ca = row00[alpha];
      const int s_right0 = alpha + t.t01 + t.t11;
      for (int beta = 0; beta <= t.t11; ++beta) {
        const double cb = ca * row11[beta];
        for (int gamma = 0; gamma <= t.t01; ++gamma) {
          const double cg = cb * row01[gamma];
          const int l01 = alpha + t.t01 - gamma;
          const int s_left = l01 + t.t10 + t.t11;
          for (int delta = 0; delta <= t.t10; ++delta) {
            const Complex left =
                pa[rank_of(l01, t.t10 - delta + beta, s_left)];
            if (left == Complex{0.0, 0.0}) continue;
            const Complex right =
                pb[rank_of(gamma + beta, alpha + delta, s_right0 + delta)];
            if (right == Complex{0.0, 0.0}) continue;
            acc += cg * row10[delta] * left * right;
          }
        }
      }
    }
    out.coeff[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

PermInvOperator compile_circuit(int n_qubits,
                                const circuits::GateSequence& seq,
                                const std::vector<double>& params,
                                ParallelPolicy policy) {
  PermInvOperator u = identity_op(n_qubits);
  for (const circuits::Gate& g : seq.gates) {
    PermInvOperator gate =
        gate_to_pinv(n_qubits, g.kind, g.axis, gate_angle(g, params), policy);
    u = multiply(gate, u, policy);
  }
  return u;
}

Complex trace(const PermInvOperator& a) {
  Complex t{0.0, 0.0};
  for (int w = 0; w <= a.n_qubits; ++w)
    t += binomial(a.n_qubits, w) * a.at({0, 0, w});
  return t;
}

Complex trace_product(const PermInvOperator& a, const PermInvOperator& b) {
  if (a.n_qubits != b.n_qubits)
    throw ConfigError("operator size mismatch in trace_product");
  Complex t{0.0, 0.0};
  const int count = type_count(a.n_qubits);
  const std::vector<TypeVector> types = local_types(a.n_qubits);
  for (int r = 0; r < count; ++r) {
    const TypeVector& tv = types[static_cast<std::size_t>(r)];
    t += type_multiplicity(a.n_qubits, tv) *
         a.coeff[static_cast<std::size_t>(r)] * b.at(transpose_type(tv));
  }
  return t;
}

void scale_gate_dephasing(PermInvOperator& a, double p) {
  const double f = noisemodel::gate_dephasing_factor(p);
  const int n = a.n_qubits;
  const int count = type_count(n);
  const std::vector<TypeVector> types = local_types(n);
  std::vector<double> fpow(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k)
    fpow[static_cast<std::size_t>(k)] = std::pow(f, k);
  for (int r = 0; r < count; ++r) {
    const TypeVector& t = types[static_cast<std::size_t>(r)];
    a.coeff[static_cast<std::size_t>(r)] *=
        fpow[static_cast<std::size_t>(t.t01 + t.t10)];
  }
}

void scale_free_phase(PermInvOperator& a, double phi) {
  const int n = a.n_qubits;
  const int count = type_count(n);
  const std::vector<TypeVector> types = local_types(n);
  std::vector<Complex> phase(static_cast<std::size_t>(2 * n) + 1);
  for (int k = -n; k <= n; ++k)
    phase[static_cast<std::size_t>(k + n)] = std::polar(1.0, -phi * k);
  for (int r = 0; r < count; ++r) {
    const TypeVector& t = types[static_cast<std::size_t>(r)];
    a.coeff[static_cast<std::size_t>(r)] *=
        phase[static_cast<std::size_t>(t.t01 - t.t10 + n)];
  }
}

void scale_twist_phase(PermInvOperator& a, double theta) {
  const int n = a.n_qubits;
  const int count = type_count(n);
  const std::vector<TypeVector> types = local_types(n);
  std::vector<double> msq(static_cast<std::size_t>(n) + 1);
  for (int w = 0; w <= n; ++w) {
    double m = 0.5 * (n - 2 * w);
    msq[static_cast<std::size_t>(w)] = m * m;
  }
  for (int r = 0; r < count; ++r) {
    const TypeVector& t = types[static_cast<std::size_t>(r)];
    a.coeff[static_cast<std::size_t>(r)] *= std::polar(
        1.0, -theta * (msq[static_cast<std::size_t>(t.ket_weight())] -
                       msq[static_cast<std::size_t>(t.bra_weight())]));
  }
}

PermInvOperator density_from_dicke_table(const Eigen::MatrixXcd& rho_dicke) {
  int n = static_cast<int>(rho_dicke.rows()) - 1;
  PermInvOperator a = zero_op(n);
  const int count = type_count(n);
  const std::vector<TypeVector> types = local_types(n);
  for (int r = 0; r < count; ++r) {
    const TypeVector& t = types[static_cast<std::size_t>(r)];
    int kw = t.ket_weight();
    int bw = t.bra_weight();
    a.coeff[static_cast<std::size_t>(r)] =
        rho_dicke(kw, bw) / std::sqrt(binomial(n, kw) * binomial(n, bw));
  }
  return a;
}

Eigen::MatrixXcd dicke_block(const PermInvOperator& a) {
  int n = a.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  const int count = type_count(n);
  const std::vector<TypeVector> types = local_types(n);
  for (int r = 0; r < count; ++r) {
    const TypeVector& t = types[static_cast<std::size_t>(r)];
    int kw = t.ket_weight();
    int bw = t.bra_weight();
    m(kw, bw) += type_multiplicity(n, t) *
                 a.coeff[static_cast<std::size_t>(r)] /
                 std::sqrt(binomial(n, kw) * binomial(n, bw));
  }
  return m;
}

TypeVector pair_type(const std::vector<int>& ket_bits,
                     const std::vector<int>& bra_bits) {
  TypeVector t;
  for (std::size_t j = 0; j < ket_bits.size(); ++j) {
    if (ket_bits[j] == 0 && bra_bits[j] == 1) ++t.t01;
    if (ket_bits[j] == 1 && bra_bits[j] == 0) ++t.t10;
    if (ket_bits[j] == 1 && bra_bits[j] == 1) ++t.t11;
  }
  return t;
}

Eigen::MatrixXcd lift_dense(const PermInvOperator& a) {
  int n = a.n_qubits;
  if (n > 12) throw ResourceError("dense lift limited to 12 qubits");
  auto dim = static_cast<Eigen::Index>(1) << n;
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x)
    for (Eigen::Index y = 0; y < dim; ++y) {
      TypeVector t;
      for (int j = 0; j < n; ++j) {
        int kb = static_cast<int>((x >> (n - 1 - j)) & 1);
        int bb = static_cast<int>((y >> (n - 1 - j)) & 1);
        if (kb == 0 && bb == 1) ++t.t01;
        if (kb == 1 && bb == 0) ++t.t10;
        if (kb == 1 && bb == 1) ++t.t11;
      }
      m(x, y) = a.at(t);
    }
  return m;
}

// ---- general-alphabet type machinery ------------------------------------

int gtype_count(int d, int max_norm) {
  // Sum over norms of compositions into d-1 parts: C(max_norm + d - 1, d - 1).
  return static_cast<int>(binomial(max_norm + d - 1, d - 1));
}

int gtype_rank(const std::vector<int>& t) {
  int d = static_cast<int>(t.size()) + 1;
  int s = 0;
  for (int v : t) s += v;
  int rank = static_cast<int>(binomial(s + d - 2, d - 1));
  int remaining = s;
  for (int k = 0; k + 1 < d - 1; ++k) {
    int parts_after = d - 2 - k;
    for (int v = t[static_cast<std::size_t>(k)] + 1; v <= remaining; ++v)
      rank += static_cast<int>(compositions(remaining - v, parts_after));
    remaining -= t[static_cast<std::size_t>(k)];
  }
  return rank;
}

namespace {

void enumerate_gtypes(int d, int norm, std::vector<int>& prefix,
                      int remaining, std::vector<std::vector<int>>& out) {
  int k = static_cast<int>(prefix.size());
  if (k == d - 2) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    prefix.push_back(v);
    enumerate_gtypes(d, norm, prefix, remaining - v, out);
    prefix.pop_back();
  }
}

std::mutex g_gtypes_mutex;
std::map<int, std::vector<std::vector<int>>> g_gtypes;  // keyed by d

const std::vector<std::vector<int>>& gtypes_up_to(int d, int max_norm) {
  std::lock_guard<std::mutex> lock(g_gtypes_mutex);
  auto& table = g_gtypes[d];
  int have = table.empty() ? -1 : [&] {
    int s = 0;
    for (int v : table.back()) s += v;
    return s;
  }();
  for (int s = have + 1; s <= max_norm; ++s) {
    std::vector<int> prefix;
    if (d == 2) {
      table.push_back({s});
    } else {
      enumerate_gtypes(d, s, prefix, s, table);
    }
  }
  return table;
}

}  // namespace

std::vector<int> gtype_at(int d, int rank) {
  int norm = 0;
  while (static_cast<int>(binomial(norm + d - 1, d - 1)) <= rank) ++norm;
  return gtypes_up_to(d, norm)[static_cast<std::size_t>(rank)];
}

tensornet::Mps typevec_mps(int d, int n_sites,
                           const std::vector<Complex>& coeffs) {
  if (d < 2) throw ConfigError("alphabet needs at least two letters");
  if (n_sites < 1) throw ConfigError("need at least one site");
  if (coeffs.size() != static_cast<std::size_t>(gtype_count(d, n_sites)))
    throw ConfigError("coefficient vector must have one entry per type");

  const int center = (n_sites + 2) / 2;  // 1-based ceil((N+1)/2)
  const auto& types = gtypes_up_to(d, n_sites);

  // Coefficient lookup by canonical type rank.
  auto coeff_of = [&](const std::vector<int>& t) -> Complex {
    return coeffs[static_cast<std::size_t>(gtype_rank(t))];
  };

  auto bump = [](std::vector<int> t, int s) {
    if (s > 0) ++t[static_cast<std::size_t>(s - 1)];
    return t;
  };

  // Left-rule site tensors for 1-based site k.
  auto left_site = [&](int k) {
    int rows = gtype_count(d, k - 1);
    int cols = gtype_count(d, k);
    std::vector<tensornet::Matrix> mats(
        static_cast<std::size_t>(d),
        tensornet::Matrix::Zero(rows, cols));
    for (int mu = 0; mu < rows; ++mu) {
      const auto& t = types[static_cast<std::size_t>(mu)];
      for (int s = 0; s < d; ++s) {
        int nu = gtype_rank(bump(t, s));
        mats[static_cast<std::size_t>(s)](mu, nu) = 1.0;
      }
    }
    return mats;
  };

  tensornet::Mps psi;
  psi.n_sites = n_sites;
  psi.phys_dim = d;
  psi.site.resize(static_cast<std::size_t>(n_sites));

  for (int j = 1; j < center; ++j)
    psi.site[static_cast<std::size_t>(j - 1)] = left_site(j);

  {
    int rows = gtype_count(d, center - 1);
    int cols = gtype_count(d, n_sites - center);
    std::vector<tensornet::Matrix> mats(
        static_cast<std::size_t>(d),
        tensornet::Matrix::Zero(rows, cols));
    for (int mu = 0; mu < rows; ++mu) {
      const auto& tl = types[static_cast<std::size_t>(mu)];
      for (int nu = 0; nu < cols; ++nu) {
        const auto& tr = types[static_cast<std::size_t>(nu)];
        for (int s = 0; s < d; ++s) {
          std::vector<int> total = bump(tl, s);
          for (std::size_t i = 0; i < total.size(); ++i)
            total[i] += tr[i];
          mats[static_cast<std::size_t>(s)](mu, nu) = coeff_of(total);
        }
      }
    }
    psi.site[static_cast<std::size_t>(center - 1)] = std::move(mats);
  }

  for (int j = center + 1; j <= n_sites; ++j) {
    auto mirrored = left_site(n_sites - j + 1);
    std::vector<tensornet::Matrix> mats;
    mats.reserve(static_cast<std::size_t>(d));
    for (auto& m : mirrored) mats.push_back(m.transpose());
    psi.site[static_cast<std::size_t>(j - 1)] = std::move(mats);
  }
  return psi;
}

PermInvOperator table_from_mpo(const tensornet::Mpo& op) {
  const int n = op.n_sites;
  PermInvOperator a = zero_op(n);
  const int count = type_count(n);
  const std::vector<TypeVector> types = local_types(n);
  for (int r = 0; r < count; ++r) {
    const TypeVector& t = types[static_cast<std::size_t>(r)];
    // Representative pair: letters (1,1), (1,0), (0,1), then (0,0), in site
    // order.
    tensornet::Matrix v = tensornet::Matrix::Ones(1, 1);
    for (int j = 0; j < n; ++j) {
      int letter;
      if (j < t.t11) {
        letter = 3;
      } else if (j < t.t11 + t.t10) {
        letter = 2;
      } else if (j < t.norm()) {
        letter = 1;
      } else {
        letter = 0;
      }
      v = v * op.site[static_cast<std::size_t>(j)]
                     [static_cast<std::size_t>(letter)];
    }
    a.coeff[static_cast<std::size_t>(r)] = v(0, 0);
  }
  return a;
}

tensornet::Mpo pinv_to_mpo(const PermInvOperator& a) {
  const int n = a.n_qubits;
  // The qubit-pair type ranking coincides with the canonical four-letter
  // ranking, so the coefficient vector carries over unchanged. Letter
  // s = 2*ket + bra; components count letters 1, 2, 3.
  tensornet::Mps flat = typevec_mps(4, n, a.coeff);
  tensornet::Mpo op;
  op.n_sites = n;
  op.phys_dim = 2;
  op.site.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto& dst = op.site[static_cast<std::size_t>(j)];
    dst.resize(4);
    // Letter s = 2*ket + bra matches the type component order
    // (0,1) -> t01, (1,0) -> t10, (1,1) -> t11.
    dst[0] = flat.site[static_cast<std::size_t>(j)][0];
    dst[1] = flat.site[static_cast<std::size_t>(j)][1];
    dst[2] = flat.site[static_cast<std::size_t>(j)][2];
    dst[3] = flat.site[static_cast<std::size_t>(j)][3];
  }
  return op;
}

}  // namespace twistopt::pinv
