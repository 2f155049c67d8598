// SPDX-License-Identifier: MIT
// Serial vs OpenMP timing for the two parallel kernels: the quadrature-node
// moment loop on the collective backend and the coefficient-table product.
// Also verifies that both policies produce bitwise identical results.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "twistopt/circuits.hpp"
#include "twistopt/objective.hpp"
#include "twistopt/pinv.hpp"
#include "twistopt/quadrature.hpp"
#include "twistopt/sim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace twistopt;
  int n = 30;
  int reps = 5;
  if (argc > 1) n = std::atoi(argv[1]);
  if (argc > 2) reps = std::atoi(argv[2]);
  std::printf("kernel benchmarks, n_qubits=%d, reps=%d\n\n", n, reps);

  // Kernel 1: moment curve over 500 quadrature nodes, collective backend.
  auto pc = circuits::build(circuits::parse_label("AAT_1_2"));
  std::vector<double> params(static_cast<std::size_t>(pc.n_params), 0.3);
  objective::GaussianPrior prior{0.74};
  auto rule = objective::gauss_hermite(500);
  std::vector<double> phis = objective::phi_nodes(prior, rule);

  sim::SimulationOptions serial;
  serial.engine = sim::Engine::kCollective;
  serial.policy = ParallelPolicy::kSerial;
  sim::SimulationOptions openmp = serial;
  openmp.policy = ParallelPolicy::kOpenMP;

  objective::MomentCurve curve_s, curve_p;
  auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i)
    curve_s = sim::moment_curve(pc, params, n, phis, serial);
  double dt_s = seconds_since(t0) / reps;
  auto t1 = Clock::now();
  for (int i = 0; i < reps; ++i)
    curve_p = sim::moment_curve(pc, params, n, phis, openmp);
  double dt_p = seconds_since(t1) / reps;
  bool same_curve =
      bitwise_equal(curve_s.jz, curve_p.jz) &&
      bitwise_equal(curve_s.jz2, curve_p.jz2);
  std::printf("moment curve (500 nodes):  serial %8.4f s   openmp %8.4f s   "
              "speedup %.2fx   bitwise %s\n",
              dt_s, dt_p, dt_s / dt_p, same_curve ? "equal" : "DIFFER");

  // Kernel 2: coefficient-table product.
  auto a = pinv::twist_z_op(n, 0.3);
  auto b = pinv::rotation_op(n, Axis::x(), 0.7);
  pinv::PermInvOperator c_s, c_p;
  auto t2 = Clock::now();
  for (int i = 0; i < reps; ++i)
    c_s = pinv::multiply(a, b, ParallelPolicy::kSerial);
  double mt_s = seconds_since(t2) / reps;
  auto t3 = Clock::now();
  for (int i = 0; i < reps; ++i)
    c_p = pinv::multiply(a, b, ParallelPolicy::kOpenMP);
  double mt_p = seconds_since(t3) / reps;
  bool same_table =
      c_s.coeff.size() == c_p.coeff.size() &&
      std::memcmp(c_s.coeff.data(), c_p.coeff.data(),
                  c_s.coeff.size() * sizeof(Complex)) == 0;
  std::printf("table product:             serial %8.4f s   openmp %8.4f s   "
              "speedup %.2fx   bitwise %s\n",
              mt_s, mt_p, mt_s / mt_p, same_table ? "equal" : "DIFFER");

  return (same_curve && same_table) ? 0 : 1;
}
