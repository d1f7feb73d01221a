#pragma once

// Shared test potentials and independent oracles. Nothing here calls into the
// code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "multispec/perron.hpp"
#include "multispec/rigidity.hpp"
#include "multispec/thermo.hpp"

namespace fixtures {

using namespace multispec;

inline const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

inline TransitionMatrix full2() { return TransitionMatrix::full_shift(2); }
inline TransitionMatrix golden() { return TransitionMatrix::golden_mean(); }
inline TransitionMatrix reverse_golden() {
  return TransitionMatrix({{0, 1}, {1, 1}});
}
inline TransitionMatrix ring3() {
  return TransitionMatrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
}

inline Potential log_p1(double a) {
  return Potential::log_of(bernoulli_matrix(a, BernoulliKind::kP1));
}
inline Potential log_p2(double a) {
  return Potential::log_of(bernoulli_matrix(a, BernoulliKind::kP2));
}
inline Potential log_chain07() {
  Eigen::Matrix2d m;
  m << 0.7, 0.3, 0.4, 0.6;
  return Potential::log_of(SupportMatrix(full2(), m));
}

inline Potential random_potential(const TransitionMatrix& base,
                                  std::uint64_t seed, int order = 2,
                                  double spread = 1.0) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> dist(-spread, spread);
  std::vector<double> values(count_admissible_words(base, order));
  for (double& x : values) x = dist(engine);
  return Potential(base, order, std::move(values));
}

inline SupportMatrix random_support_matrix(const TransitionMatrix& base,
                                           std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> dist(0.05, 2.0);
  const int n = base.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (base.allowed(i, j)) m(i, j) = dist(engine);
  return SupportMatrix(base, m);
}

/// Random aperiodic 0-1 matrix of size n with density around 0.6.
inline TransitionMatrix random_transition(int n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::bernoulli_distribution coin(0.6);
  for (;;) {
    ZeroOneArray a(n, std::vector<int>(n, 0));
    for (auto& row : a)
      for (int& x : row) x = coin(engine) ? 1 : 0;
    if (check_aperiodic(a).accepted) return TransitionMatrix(a);
  }
}

/// Spectral radius through Eigen's general eigensolver.
inline double spectral_radius(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// log spectral radius of exp(q f) on the support, straight from Eigen.
inline double pressure_oracle(const Potential& f2, double q = 1.0) {
  const int n = f2.base().size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (f2.base().allowed(i, j)) m(i, j) = std::exp(q * f2.edge(i, j));
  return std::log(spectral_radius(m));
}

/// Mean weights of all simple cycles, by exhaustive search.
inline std::pair<double, double> brute_cycle_means(const TransitionMatrix& a,
                                                   const Eigen::MatrixXd& w) {
  const int n = a.size();
  double lo = INFINITY, hi = -INFINITY;
  std::vector<int> path;
  std::vector<char> used(n, 0);
  auto dfs = [&](auto&& self, int start, int v, double total) -> void {
    for (int u = 0; u < n; ++u) {
      if (!a.allowed(v, u)) continue;
      if (u == start) {
        const double mean = (total + w(v, u)) / (path.size());
        lo = std::min(lo, mean);
        hi = std::max(hi, mean);
      } else if (u > start && !used[u]) {
        used[u] = 1;
        path.push_back(u);
        self(self, start, u, total + w(v, u));
        path.pop_back();
        used[u] = 0;
      }
    }
  };
  for (int s = 0; s < n; ++s) {
    used.assign(n, 0);
    used[s] = 1;
    path = {s};
    dfs(dfs, s, s, 0.0);
  }
  return {lo, hi};
}

inline std::vector<TransitionMatrix> test_bases() {
  return {full2(), golden(), reverse_golden(), ring3(),
          TransitionMatrix({{0, 1, 0}, {0, 0, 1}, {1, 1, 1}})};
}

}  // namespace fixtures
