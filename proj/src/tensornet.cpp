// SPDX-License-Identifier: MIT
#include "twistopt/tensornet.hpp"

#include <cmath>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>

namespace twistopt::tensornet {

namespace {

int chain_max_bond(const std::vector<std::vector<Matrix>>& site) {
  int b = 1;
  for (const auto& s : site)
    for (const auto& m : s) {
      b = std::max(b, static_cast<int>(m.rows()));
      b = std::max(b, static_cast<int>(m.cols()));
    }
  return b;
}

std::size_t chain_bytes(const std::vector<std::vector<Matrix>>& site) {
  std::size_t total = 0;
  for (const auto& s : site)
    for (const auto& m : s)
      total += static_cast<std::size_t>(m.size()) * sizeof(Complex);
  return total;
}

}  // namespace

int Mps::max_bond() const { return chain_max_bond(site); }
std::size_t Mps::bytes() const { return chain_bytes(site); }
int Mpo::max_bond() const { return chain_max_bond(site); }
std::size_t Mpo::bytes() const { return chain_bytes(site); }

Mps mps_from_weight_coeffs(int n_sites, const std::vector<Complex>& c) {
  if (n_sites < 1) throw ConfigError("need at least one site");
  if (c.size() != static_cast<std::size_t>(n_sites) + 1)
    throw ConfigError("need one coefficient per Hamming weight");

  const int center = (n_sites + 2) / 2;  // 1-based
  Mps psi;
  psi.n_sites = n_sites;
  psi.phys_dim = 2;
  psi.site.resize(static_cast<std::size_t>(n_sites));

  // Left-rule site k tracks the running count of ones: value 0 keeps the
  // bond index, value 1 shifts it up.
  auto left_site = [](int k) {
    std::vector<Matrix> mats(2, Matrix::Zero(k, k + 1));
    for (int r = 0; r < k; ++r) {
      mats[0](r, r) = 1.0;
      mats[1](r, r + 1) = 1.0;
    }
    return mats;
  };

  for (int j = 1; j < center; ++j)
    psi.site[static_cast<std::size_t>(j - 1)] = left_site(j);

  {
    int rows = center;
    int cols = n_sites - center + 1;
    std::vector<Matrix> mats(2, Matrix::Zero(rows, cols));
    for (int m = 0; m < rows; ++m)
      for (int l = 0; l < cols; ++l) {
        mats[0](m, l) = c[static_cast<std::size_t>(m + l)];
        mats[1](m, l) = c[static_cast<std::size_t>(m + l + 1)];
      }
    psi.site[static_cast<std::size_t>(center - 1)] = std::move(mats);
  }

  for (int j = center + 1; j <= n_sites; ++j) {
    auto mirrored = left_site(n_sites - j + 1);
    std::vector<Matrix> mats;
    mats.reserve(2);
    for (auto& m : mirrored) mats.push_back(m.transpose());
    psi.site[static_cast<std::size_t>(j - 1)] = std::move(mats);
  }
  return psi;
}

std::vector<Complex> weight_coeffs_from_mps(const Mps& psi) {
  const int n = psi.n_sites;
  // Representative string for weight w: ones on the first w sites. Prefix
  // products of the one-tensors and suffix products of the zero-tensors
  // give every representative amplitude in one sweep.
  std::vector<Matrix> prefix(static_cast<std::size_t>(n) + 1);
  prefix[0] = Matrix::Ones(1, 1);
  for (int j = 0; j < n; ++j)
    prefix[static_cast<std::size_t>(j) + 1] =
        prefix[static_cast<std::size_t>(j)] *
        psi.site[static_cast<std::size_t>(j)][1];
  std::vector<Matrix> suffix(static_cast<std::size_t>(n) + 1);
  suffix[static_cast<std::size_t>(n)] = Matrix::Ones(1, 1);
  for (int j = n - 1; j >= 0; --j)
    suffix[static_cast<std::size_t>(j)] =
        psi.site[static_cast<std::size_t>(j)][0] *
        suffix[static_cast<std::size_t>(j) + 1];

  std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
  for (int w = 0; w <= n; ++w)
    c[static_cast<std::size_t>(w)] = (prefix[static_cast<std::size_t>(w)] *
                                      suffix[static_cast<std::size_t>(w)])(0, 0);
  return c;
}

Mpo mpo_from_weight_factors(int n_sites, const std::vector<Complex>& f) {
  Mps skeleton = mps_from_weight_coeffs(n_sites, f);
  Mpo op;
  op.n_sites = n_sites;
  op.phys_dim = 2;
  op.site.resize(static_cast<std::size_t>(n_sites));
  for (int j = 0; j < n_sites; ++j) {
    const auto& src = skeleton.site[static_cast<std::size_t>(j)];
    auto& dst = op.site[static_cast<std::size_t>(j)];
    dst.assign(4, Matrix::Zero(src[0].rows(), src[0].cols()));
    dst[0] = src[0];
    dst[3] = src[1];
  }
  return op;
}

Mpo mpo_twist_z(int n_sites, double theta) {
  std::vector<Complex> f(static_cast<std::size_t>(n_sites) + 1);
  for (int w = 0; w <= n_sites; ++w) {
    double m = 0.5 * (n_sites - 2 * w);
    f[static_cast<std::size_t>(w)] = std::polar(1.0, -theta * m * m);
  }
  return mpo_from_weight_factors(n_sites, f);
}

Eigen::Matrix2cd qubit_rotation(const Axis& axis, double theta) {
  double c = std::cos(0.5 * theta);
  double s = std::sin(0.5 * theta);
  Eigen::Matrix2cd u;
  u(0, 0) = Complex{c, -s * axis.nz};
  u(0, 1) = Complex{-s * axis.ny, -s * axis.nx};
  u(1, 0) = Complex{s * axis.ny, -s * axis.nx};
  u(1, 1) = Complex{c, s * axis.nz};
  return u;
}

Mpo mpo_rotation(int n_sites, const Axis& axis, double theta) {
  return product_mpo(n_sites, qubit_rotation(axis, theta));
}

Mpo product_mpo(int n_sites, const Eigen::Matrix2cd& u) {
  Mpo op;
  op.n_sites = n_sites;
  op.phys_dim = 2;
  op.site.resize(static_cast<std::size_t>(n_sites));
  for (auto& s : op.site) {
    s.assign(4, Matrix::Zero(1, 1));
    for (int m = 0; m < 2; ++m)
      for (int n = 0; n < 2; ++n) s[static_cast<std::size_t>(m * 2 + n)](0, 0) = u(m, n);
  }
  return op;
}

Mpo mpo_identity(int n_sites) {
  return product_mpo(n_sites, Eigen::Matrix2cd::Identity());
}

namespace {

double half_z(int m) { return m == 0 ? 0.5 : -0.5; }

}  // namespace

Mpo mpo_jz(int n_sites) {
  Mpo op;
  op.n_sites = n_sites;
  op.phys_dim = 2;
  op.site.resize(static_cast<std::size_t>(n_sites));
  if (n_sites == 1) {
    auto& s = op.site[0];
    s.assign(4, Matrix::Zero(1, 1));
    for (int m = 0; m < 2; ++m) s[static_cast<std::size_t>(m * 3)](0, 0) = half_z(m);
    return op;
  }
  for (int j = 0; j < n_sites; ++j) {
    auto& s = op.site[static_cast<std::size_t>(j)];
    int rows = j == 0 ? 1 : 2;
    int cols = j == n_sites - 1 ? 1 : 2;
    s.assign(4, Matrix::Zero(rows, cols));
    for (int m = 0; m < 2; ++m) {
      Matrix& d = s[static_cast<std::size_t>(m * 3)];
      double h = half_z(m);
      if (j == 0) {
        d(0, 0) = 1.0;
        d(0, 1) = h;
      } else if (j == n_sites - 1) {
        d(0, 0) = h;
        d(1, 0) = 1.0;
      } else {
        d(0, 0) = 1.0;
        d(0, 1) = h;
        d(1, 1) = 1.0;
      }
    }
  }
  return op;
}

Mpo mpo_jz2(int n_sites) {
  Mpo op;
  op.n_sites = n_sites;
  op.phys_dim = 2;
  op.site.resize(static_cast<std::size_t>(n_sites));
  if (n_sites == 1) {
    auto& s = op.site[0];
    s.assign(4, Matrix::Zero(1, 1));
    for (int m = 0; m < 2; ++m) s[static_cast<std::size_t>(m * 3)](0, 0) = 0.25;
    return op;
  }
  for (int j = 0; j < n_sites; ++j) {
    auto& s = op.site[static_cast<std::size_t>(j)];
    int rows = j == 0 ? 1 : 3;
    int cols = j == n_sites - 1 ? 1 : 3;
    s.assign(4, Matrix::Zero(rows, cols));
    for (int m = 0; m < 2; ++m) {
      Matrix& d = s[static_cast<std::size_t>(m * 3)];
      double h = half_z(m);
      double z = 2.0 * h;
      if (j == 0) {
        d(0, 0) = 1.0;
        d(0, 1) = h;
        d(0, 2) = 0.25;
      } else if (j == n_sites - 1) {
        d(0, 0) = 0.25;
        d(1, 0) = z;
        d(2, 0) = 1.0;
      } else {
        d(0, 0) = 1.0;
        d(0, 1) = h;
        d(0, 2) = 0.25;
        d(1, 1) = 1.0;
        d(1, 2) = z;
        d(2, 2) = 1.0;
      }
    }
  }
  return op;
}

Mps apply_mpo(const Mpo& op, const Mps& state) {
  if (op.n_sites != state.n_sites)
    throw ConfigError("site count mismatch in apply_mpo");
  Mps out;
  out.n_sites = state.n_sites;
  out.phys_dim = state.phys_dim;
  out.site.resize(static_cast<std::size_t>(state.n_sites));
  const int d = state.phys_dim;
  for (int j = 0; j < state.n_sites; ++j) {
    const auto& o = op.site[static_cast<std::size_t>(j)];
    const auto& a = state.site[static_cast<std::size_t>(j)];
    auto& b = out.site[static_cast<std::size_t>(j)];
    b.resize(static_cast<std::size_t>(d));
    for (int m = 0; m < d; ++m) {
      Matrix acc = Matrix::Zero(o[0].rows() * a[0].rows(),
                                o[0].cols() * a[0].cols());
      for (int s = 0; s < d; ++s)
        acc += Eigen::kroneckerProduct(o[static_cast<std::size_t>(m * d + s)],
                                       a[static_cast<std::size_t>(s)]);
      b[static_cast<std::size_t>(m)] = std::move(acc);
    }
  }
  return out;
}

Mpo apply_mpo(const Mpo& op, const Mpo& target) {
  if (op.n_sites != target.n_sites)
    throw ConfigError("site count mismatch in apply_mpo");
  Mpo out;
  out.n_sites = op.n_sites;
  out.phys_dim = op.phys_dim;
  out.site.resize(static_cast<std::size_t>(op.n_sites));
  const int d = op.phys_dim;
  for (int j = 0; j < op.n_sites; ++j) {
    const auto& o = op.site[static_cast<std::size_t>(j)];
    const auto& p = target.site[static_cast<std::size_t>(j)];
    auto& c = out.site[static_cast<std::size_t>(j)];
    c.resize(static_cast<std::size_t>(d * d));
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        Matrix acc = Matrix::Zero(o[0].rows() * p[0].rows(),
                                  o[0].cols() * p[0].cols());
        for (int s = 0; s < d; ++s)
          acc += Eigen::kroneckerProduct(
              o[static_cast<std::size_t>(m * d + s)],
              p[static_cast<std::size_t>(s * d + n)]);
        c[static_cast<std::size_t>(m * d + n)] = std::move(acc);
      }
  }
  return out;
}

Mpo dagger(const Mpo& op) {
  Mpo out;
  out.n_sites = op.n_sites;
  out.phys_dim = op.phys_dim;
  out.site.resize(static_cast<std::size_t>(op.n_sites));
  const int d = op.phys_dim;
  for (int j = 0; j < op.n_sites; ++j) {
    const auto& src = op.site[static_cast<std::size_t>(j)];
    auto& dst = out.site[static_cast<std::size_t>(j)];
    dst.resize(static_cast<std::size_t>(d * d));
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n)
        dst[static_cast<std::size_t>(m * d + n)] =
            src[static_cast<std::size_t>(n * d + m)].conjugate();
  }
  return out;
}

namespace {

// Predicted storage of the site-wise product of two chains.
std::size_t product_bytes(const Mpo& a, const Mpo& b) {
  std::size_t total = 0;
  for (int j = 0; j < a.n_sites; ++j) {
    const auto& ma = a.site[static_cast<std::size_t>(j)][0];
    const auto& mb = b.site[static_cast<std::size_t>(j)][0];
    total += static_cast<std::size_t>(a.phys_dim) * a.phys_dim *
             static_cast<std::size_t>(ma.rows() * mb.rows()) *
             static_cast<std::size_t>(ma.cols() * mb.cols()) * sizeof(Complex);
  }
  return total;
}

void check_budget(const Mpo& a, const Mpo& b, std::size_t budget_bytes,
                  const char* stage) {
  if (product_bytes(a, b) > budget_bytes)
    throw ResourceError(std::string("tensor budget exceeded during ") + stage);
}

}  // namespace

DensityMpo conjugate_by_unitary(const DensityMpo& rho, const Mpo& u,
                                std::size_t budget_bytes, const char* stage) {
  check_budget(u, rho, budget_bytes, stage);
  Mpo left = apply_mpo(u, rho);
  Mpo ud = dagger(u);
  check_budget(left, ud, budget_bytes, stage);
  return apply_mpo(left, ud);
}

Mpo fold_observable(const Mpo& obs, const Mpo& u, std::size_t budget_bytes,
                    const char* stage) {
  Mpo ud = dagger(u);
  check_budget(ud, obs, budget_bytes, stage);
  Mpo left = apply_mpo(ud, obs);
  check_budget(left, u, budget_bytes, stage);
  return apply_mpo(left, u);
}

Complex overlap(const Mps& bra, const Mps& ket) {
  if (bra.n_sites != ket.n_sites)
    throw ConfigError("site count mismatch in overlap");
  Matrix env = Matrix::Ones(1, 1);
  for (int j = 0; j < bra.n_sites; ++j) {
    const auto& b = bra.site[static_cast<std::size_t>(j)];
    const auto& k = ket.site[static_cast<std::size_t>(j)];
    Matrix next = Matrix::Zero(b[0].cols(), k[0].cols());
    for (std::size_t s = 0; s < b.size(); ++s)
      next += b[s].adjoint() * env * k[s];
    env = std::move(next);
  }
  return env(0, 0);
}

Complex expectation(const Mps& psi, const Mpo& op) {
  return overlap(psi, apply_mpo(op, psi));
}

Complex trace(const Mpo& op) {
  Matrix env = Matrix::Ones(1, 1);
  const int d = op.phys_dim;
  for (int j = 0; j < op.n_sites; ++j) {
    const auto& s = op.site[static_cast<std::size_t>(j)];
    Matrix step = Matrix::Zero(s[0].rows(), s[0].cols());
    for (int m = 0; m < d; ++m) step += s[static_cast<std::size_t>(m * d + m)];
    env = env * step;
  }
  return env(0, 0);
}

Complex trace_product(const Mpo& a, const Mpo& b) {
  if (a.n_sites != b.n_sites)
    throw ConfigError("site count mismatch in trace_product");
  const int d = a.phys_dim;
  Matrix env = Matrix::Ones(1, 1);
  for (int j = 0; j < a.n_sites; ++j) {
    const auto& sa = a.site[static_cast<std::size_t>(j)];
    const auto& sb = b.site[static_cast<std::size_t>(j)];
    Matrix next = Matrix::Zero(sa[0].cols(), sb[0].cols());
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n)
        next += sa[static_cast<std::size_t>(m * d + n)].transpose() * env *
                sb[static_cast<std::size_t>(n * d + m)];
    env = std::move(next);
  }
  return env(0, 0);
}

DensityMpo density_from_dicke(const Eigen::MatrixXcd& rho_dicke) {
  const int n = static_cast<int>(rho_dicke.rows()) - 1;
  if (n < 1) throw ConfigError("need at least one site");
  if (rho_dicke.cols() != rho_dicke.rows())
    throw ConfigError("weight-basis density matrix must be square");

  // Scaled matrix: coefficient of a pair string with ket weight a and bra
  // weight b.
  Eigen::MatrixXcd w(n + 1, n + 1);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      w(a, b) = rho_dicke(a, b) / std::sqrt(binomial(n, a) * binomial(n, b));

  const int center = (n + 2) / 2;

  // The ket and bra weights are tracked independently; each site tensor is
  // the Kronecker pair of two weight-counting tensors.
  auto left_shift = [](int k, int inc) {
    Matrix m = Matrix::Zero(k, k + 1);
    for (int r = 0; r < k; ++r) m(r, r + inc) = 1.0;
    return m;
  };

  DensityMpo rho;
  rho.n_sites = n;
  rho.phys_dim = 2;
  rho.site.resize(static_cast<std::size_t>(n));

  for (int j = 1; j < center; ++j) {
    auto& s = rho.site[static_cast<std::size_t>(j - 1)];
    s.resize(4);
    for (int m = 0; m < 2; ++m)
      for (int b = 0; b < 2; ++b)
        s[static_cast<std::size_t>(m * 2 + b)] =
            Eigen::kroneckerProduct(left_shift(j, m), left_shift(j, b));
  }

  {
    int rows = center;
    int cols = n - center + 1;
    auto& s = rho.site[static_cast<std::size_t>(center - 1)];
    s.assign(4, Matrix::Zero(rows * rows, cols * cols));
    for (int m = 0; m < 2; ++m)
      for (int b = 0; b < 2; ++b) {
        Matrix& d = s[static_cast<std::size_t>(m * 2 + b)];
        for (int pk = 0; pk < rows; ++pk)
          for (int pb = 0; pb < rows; ++pb)
            for (int qk = 0; qk < cols; ++qk)
              for (int qb = 0; qb < cols; ++qb)
                d(pk * rows + pb, qk * cols + qb) =
                    w(pk + m + qk, pb + b + qb);
      }
  }

  for (int j = center + 1; j <= n; ++j) {
    auto& s = rho.site[static_cast<std::size_t>(j - 1)];
    s.resize(4);
    int k = n - j + 1;
    for (int m = 0; m < 2; ++m)
      for (int b = 0; b < 2; ++b)
        s[static_cast<std::size_t>(m * 2 + b)] =
            Eigen::kroneckerProduct(left_shift(k, m), left_shift(k, b))
                .transpose();
  }
  return rho;
}

DensityMpo free_evolution_apply(const DensityMpo& rho, double phi,
                                const noisemodel::NoiseSpec& spec) {
  const int n = rho.n_sites;
  DensityMpo out;
  out.n_sites = n;
  out.phys_dim = 2;
  out.site.resize(static_cast<std::size_t>(n));

  const bool nn = spec.c2 != 0.0 && n > 1;
  // Signature values in bond order: 0, +1, -1.
  constexpr int kSig[3] = {0, 1, -1};
  auto sig_index = [](int s) { return s == 0 ? 0 : (s == 1 ? 1 : 2); };

  for (int j = 0; j < n; ++j) {
    const auto& src = rho.site[static_cast<std::size_t>(j)];
    auto& dst = out.site[static_cast<std::size_t>(j)];
    dst.resize(4);
    for (int m = 0; m < 2; ++m)
      for (int b = 0; b < 2; ++b) {
        int s = noisemodel::phase_signature(m, b);
        Complex factor = std::polar(1.0, -phi * s) *
                         noisemodel::weight_local_factor(spec, s);
        const Matrix& base = src[static_cast<std::size_t>(m * 2 + b)];
        if (!nn) {
          dst[static_cast<std::size_t>(m * 2 + b)] = factor * base;
          continue;
        }
        Matrix carrier;
        if (j == 0) {
          carrier = Matrix::Zero(1, 3);
          carrier(0, sig_index(s)) = 1.0;
        } else if (j == n - 1) {
          carrier = Matrix::Zero(3, 1);
          for (int a = 0; a < 3; ++a)
            carrier(a, 0) = noisemodel::weight_nn_factor(spec, kSig[a], s);
        } else {
          carrier = Matrix::Zero(3, 3);
          for (int a = 0; a < 3; ++a)
            carrier(a, sig_index(s)) =
                noisemodel::weight_nn_factor(spec, kSig[a], s);
        }
        dst[static_cast<std::size_t>(m * 2 + b)] =
            factor * Eigen::kroneckerProduct(carrier, base).eval();
      }
  }
  return out;
}

void gate_dephasing_apply(Mpo& op, double p) {
  double f = noisemodel::gate_dephasing_factor(p);
  for (auto& s : op.site) {
    s[1] *= f;
    s[2] *= f;
  }
}

Eigen::VectorXcd to_dense(const Mps& psi) {
  const int n = psi.n_sites;
  if (n > 14) throw ResourceError("dense state reconstruction limited to 14 sites");
  const int d = psi.phys_dim;
  // Partial contractions over prefixes, most significant site first.
  std::vector<Matrix> partial{Matrix::Ones(1, 1)};
  for (int j = 0; j < n; ++j) {
    std::vector<Matrix> next;
    next.reserve(partial.size() * static_cast<std::size_t>(d));
    for (const auto& pm : partial)
      for (int s = 0; s < d; ++s)
        next.push_back(pm * psi.site[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)]);
    partial = std::move(next);
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(partial.size()));
  for (std::size_t x = 0; x < partial.size(); ++x)
    v(static_cast<Eigen::Index>(x)) = partial[x](0, 0);
  return v;
}

Eigen::MatrixXcd to_dense(const Mpo& op) {
  const int n = op.n_sites;
  if (n > 10)
    throw ResourceError("dense operator reconstruction limited to 10 sites");
  const int d = op.phys_dim;
  auto dim = static_cast<Eigen::Index>(std::pow(d, n) + 0.5);
  Eigen::MatrixXcd m(dim, dim);
  // One column at a time: fixing the input string turns the operator into a
  // state whose dense expansion is that column.
  for (Eigen::Index y = 0; y < dim; ++y) {
    Mps col;
    col.n_sites = n;
    col.phys_dim = d;
    col.site.resize(static_cast<std::size_t>(n));
    Eigen::Index rem = y;
    for (int j = n - 1; j >= 0; --j) {
      int letter = static_cast<int>(rem % d);
      rem /= d;
      auto& s = col.site[static_cast<std::size_t>(j)];
      s.resize(static_cast<std::size_t>(d));
      for (int mm = 0; mm < d; ++mm)
        s[static_cast<std::size_t>(mm)] =
            op.site[static_cast<std::size_t>(j)]
                   [static_cast<std::size_t>(mm * d + letter)];
    }
    m.col(y) = to_dense(col);
  }
  return m;
}

}  // namespace twistopt::tensornet
