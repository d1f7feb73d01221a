#include "multispec/perron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "multispec/errors.hpp"

namespace multispec {

SupportMatrix::SupportMatrix(TransitionMatrix base, Eigen::MatrixXd values)
    : base_(std::move(base)), values_(std::move(values)) {
  const int n = base_.size();
  if (values_.rows() != n || values_.cols() != n)
    throw ValidationError("matrix size does not match its transition base");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = values_(i, j);
      if (!std::isfinite(x))
        throw ValidationError("matrix entry is not finite");
      if (base_.allowed(i, j) ? !(x > 0.0) : x != 0.0)
        throw ValidationError("matrix entry (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) +
                              ") does not match the transition support");
    }
}

namespace {

double relative_residual(const Eigen::MatrixXd& m, const Eigen::VectorXd& x,
                         double root) {
  return (m * x - root * x).lpNorm<Eigen::Infinity>() /
         (root * x.lpNorm<Eigen::Infinity>());
}

// Normalized limit of C^(2^k) 1, reached in O(log) products even when the
// second eigenvalue of C is close to the first in modulus.
Eigen::VectorXd squared_iterate(const Eigen::MatrixXd& c) {
  const Eigen::Index n = c.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n) / static_cast<double>(n);
  Eigen::MatrixXd power = c;
  for (int k = 0; k < 80; ++k) {
    Eigen::VectorXd next = power * Eigen::VectorXd::Ones(n);
    next /= next.sum();
    const double change = (next - x).lpNorm<Eigen::Infinity>();
    x = next;
    if (change <= 1e-15 * x.lpNorm<Eigen::Infinity>()) break;
    power = power * power;
    power /= power.maxCoeff();
  }
  return x;
}

// Dominant right eigenvector of a primitive matrix. Even powers cannot
// separate lambda from an eigenvalue near -lambda, so the iteration runs on
// C = B + sI with s an upper Collatz-Wielandt bound for lambda taken from a
// first pass on B. C has the same eigenvectors and a dominant eigenvalue
// well separated from the rest.
Eigen::VectorXd dominant_vector(const Eigen::MatrixXd& b, double tol,
                                long max_iterations, double& root) {
  const Eigen::Index n = b.rows();
  Eigen::VectorXd x = squared_iterate(b);
  const double s = (b * x).cwiseQuotient(x).maxCoeff();
  const Eigen::MatrixXd c = b + s * Eigen::MatrixXd::Identity(n, n);
  x = squared_iterate(c);

  for (long it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd y = b * x;
    root = y.sum() / x.sum();
    if (!(root > 0.0) || !std::isfinite(root))
      throw ConvergenceError("power iteration produced a non-positive root");
    if (relative_residual(b, x, root) <= tol) return x;
    x = y + s * x;
    x /= x.sum();
  }
  throw ConvergenceError("power iteration did not converge within " +
                         std::to_string(max_iterations) + " iterations");
}

}  // namespace

PerronTriple perron(const SupportMatrix& m, const PerronOptions& options) {
  const Eigen::MatrixXd& values = m.values();
  const double scale = values.maxCoeff();
  const Eigen::MatrixXd b = values / scale;
  // Rounding in B x limits the attainable residual for larger alphabets.
  const double tol =
      std::max(options.tol, 64.0 * static_cast<double>(m.size()) *
                                std::numeric_limits<double>::epsilon());

  double right_root = 0.0, left_root = 0.0;
  Eigen::VectorXd right =
      dominant_vector(b, tol, options.max_iterations, right_root);
  Eigen::VectorXd left =
      dominant_vector(b.transpose(), tol, options.max_iterations, left_root);

  PerronTriple out;
  out.root = right_root * scale;
  out.right = right / right.sum();
  out.left = left / left.dot(out.right);
  out.residual = std::max(relative_residual(b, out.right, right_root),
                          relative_residual(b.transpose(), out.left, right_root));
  if (!(out.right.minCoeff() > 0.0) || !(out.left.minCoeff() > 0.0))
    throw ConvergenceError("Perron vectors are not strictly positive");
  return out;
}

Eigen::VectorXd perron_vector_by_linear_solve(const SupportMatrix& m,
                                              double root) {
  const Eigen::Index n = m.size();
  const Eigen::MatrixXd shifted =
      m.values() - root * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::VectorXd best;
  double best_residual = std::numeric_limits<double>::infinity();
  for (Eigen::Index drop = 0; drop < n; ++drop) {
    Eigen::MatrixXd system(n, n);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != drop) system.row(row++) = shifted.row(i);
    system.row(n - 1).setOnes();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) continue;
    Eigen::VectorXd x = lu.solve(rhs);
    const double residual = (shifted * x).lpNorm<Eigen::Infinity>();
    if (residual < best_residual) {
      best_residual = residual;
      best = std::move(x);
    }
  }
  if (best.size() == 0)
    throw ConvergenceError(
        "no row deletion gives an invertible system; root is not simple");
  return best;
}

double perron_derivative(const PerronTriple& triple,
                         const Eigen::MatrixXd& derivative) {
  return triple.left.dot(derivative * triple.right) /
         triple.left.dot(triple.right);
}

double perron_derivative(const MatrixFamily& family, double q0,
                         const PerronOptions& options) {
  const auto triple = perron(family.value(q0), options);
  return perron_derivative(triple, family.derivative(q0));
}

Eigen::VectorXd stationary_distribution(const SupportMatrix& p) {
  const Eigen::Index n = p.size();
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(p.values().row(i).sum() - 1.0) > 1e-12)
      throw ValidationError("row " + std::to_string(i + 1) +
                            " is not stochastic");
  Eigen::MatrixXd system(n + 1, n);
  system.topRows(n) =
      p.values().transpose() - Eigen::MatrixXd::Identity(n, n);
  system.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  Eigen::VectorXd pi = system.colPivHouseholderQr().solve(rhs);
  if (!(pi.minCoeff() > 0.0))
    throw ConvergenceError("stationary distribution is not positive");
  return pi / pi.sum();
}

double cycle_mean(const Eigen::MatrixXd& weights, const Word& cycle) {
  double total = 0.0;
  for (std::size_t k = 0; k < cycle.size(); ++k)
    total += weights(cycle[k], cycle[(k + 1) % cycle.size()]);
  return total / static_cast<double>(cycle.size());
}

namespace {

struct MinMeanCycle {
  double mean;
  Word cycle;
};

// Karp's minimum mean cycle for a strongly connected graph.
MinMeanCycle karp_min_mean(const TransitionMatrix& a,
                           const Eigen::MatrixXd& w) {
  const int n = a.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // walk[k][v]: least weight of a k-edge walk ending at v
  std::vector<std::vector<double>> walk(n + 1, std::vector<double>(n, kInf));
  std::vector<std::vector<int>> pred(n + 1, std::vector<int>(n, -1));
  std::fill(walk[0].begin(), walk[0].end(), 0.0);
  for (int k = 1; k <= n; ++k)
    for (int u = 0; u < n; ++u) {
      if (walk[k - 1][u] == kInf) continue;
      for (int v = 0; v < n; ++v) {
        if (!a.allowed(u, v)) continue;
        const double cand = walk[k - 1][u] + w(u, v);
        if (cand < walk[k][v]) {
          walk[k][v] = cand;
          pred[k][v] = u;
        }
      }
    }

  double best = kInf;
  int best_v = -1;
  for (int v = 0; v < n; ++v) {
    if (walk[n][v] == kInf) continue;
    double worst = -kInf;
    for (int k = 0; k < n; ++k)
      if (walk[k][v] != kInf)
        worst = std::max(worst, (walk[n][v] - walk[k][v]) / (n - k));
    if (worst < best) {
      best = worst;
      best_v = v;
    }
  }

  // The n-edge walk into best_v contains a cycle of minimum mean.
  Word path(n + 1);
  path[n] = best_v;
  for (int k = n; k > 0; --k) path[k - 1] = pred[k][path[k]];

  MinMeanCycle out{kInf, {}};
  Word stack;
  std::map<int, std::size_t> position;
  for (int v : path) {
    const auto it = position.find(v);
    if (it != position.end()) {
      Word cycle(stack.begin() + static_cast<std::ptrdiff_t>(it->second),
                 stack.end());
      const double mean = cycle_mean(w, cycle);
      if (mean < out.mean) out = {mean, cycle};
      for (std::size_t k = it->second; k < stack.size(); ++k)
        position.erase(stack[k]);
      stack.resize(it->second);
    }
    position[v] = stack.size();
    stack.push_back(v);
  }
  out.mean = best;
  return out;
}

}  // namespace

CycleMeanExtremes cycle_mean_extremes(const TransitionMatrix& a,
                                      const Eigen::MatrixXd& weights) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(a.size(), a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j)
      if (a.allowed(i, j)) w(i, j) = weights(i, j);
  const auto low = karp_min_mean(a, w);
  const auto high = karp_min_mean(a, -w);
  return CycleMeanExtremes{low.mean, -high.mean, low.cycle, high.cycle};
}

}  // namespace multispec
