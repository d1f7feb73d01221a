#pragma once

// Perron-Frobenius data for non-negative matrices supported exactly on the
// edges of an aperiodic transition matrix.

#include <functional>

#include <Eigen/Dense>

#include "multispec/shiftspace.hpp"

namespace multispec {

/// Non-negative matrix that is positive exactly where its base allows a
/// transition.
class SupportMatrix {
 public:
  SupportMatrix(TransitionMatrix base, Eigen::MatrixXd values);

  const TransitionMatrix& base() const { return base_; }
  const Eigen::MatrixXd& values() const { return values_; }
  int size() const { return base_.size(); }
  double operator()(int i, int j) const { return values_(i, j); }

 private:
  TransitionMatrix base_;
  Eigen::MatrixXd values_;
};

/// Perron root with left/right eigenvectors. `right` sums to one and
/// `left.dot(right) == 1`. `residual` is the larger of the two relative
/// residuals |xM - root x|_inf / (root |x|_inf).
struct PerronTriple {
  double root = 0.0;
  Eigen::VectorXd left;
  Eigen::VectorXd right;
  double residual = 0.0;
};

struct PerronOptions {
  double tol = 1e-13;
  long max_iterations = 1'000'000;
};

PerronTriple perron(const SupportMatrix& m, const PerronOptions& options = {});

/// Right Perron vector from the bordered system (M - root I)x = 0, sum x = 1,
/// solved with one row of M - root I deleted.
Eigen::VectorXd perron_vector_by_linear_solve(const SupportMatrix& m,
                                              double root);

/// Entrywise smooth one-parameter family q -> M(q) with its derivative.
struct MatrixFamily {
  std::function<SupportMatrix(double)> value;
  std::function<Eigen::MatrixXd(double)> derivative;
};

/// d(root)/dq = u M'(q) v / (u v).
double perron_derivative(const MatrixFamily& family, double q0,
                         const PerronOptions& options = {});
double perron_derivative(const PerronTriple& triple,
                         const Eigen::MatrixXd& derivative);

/// Stationary distribution of a row-stochastic matrix, solved directly from
/// pi (P - I) = 0, sum pi = 1.
Eigen::VectorXd stationary_distribution(const SupportMatrix& p);

/// Extreme mean edge weights over directed cycles (Karp). Each bound comes
/// with a simple cycle realizing it, listed as its vertex sequence.
struct CycleMeanExtremes {
  double min_mean = 0.0;
  double max_mean = 0.0;
  Word min_cycle;
  Word max_cycle;
};

/// `weights(i, j)` is read only on allowed edges.
CycleMeanExtremes cycle_mean_extremes(const TransitionMatrix& a,
                                      const Eigen::MatrixXd& weights);

/// Mean weight of a closed cycle given by its vertex sequence.
double cycle_mean(const Eigen::MatrixXd& weights, const Word& cycle);

}  // namespace multispec
