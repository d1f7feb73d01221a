#pragma once

// Locally constant potentials, pressure, Gibbs-Markov measures and the
// quantities derived from them.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "multispec/perron.hpp"
#include "multispec/shiftspace.hpp"

namespace multispec {

/// Real function depending on the first `order` symbols, tabulated over the
/// admissible words of that length (lexicographic order).
class Potential {
 public:
  Potential(TransitionMatrix base, int order, std::vector<double> values,
            std::size_t cap = kDefaultEnumerationCap);

  static Potential from_words(TransitionMatrix base, int order,
                              const std::map<Word, double>& table);
  static Potential constant(TransitionMatrix base, double c, int order = 2);
  /// Order 2 with f(ij) = log m(i,j).
  static Potential log_of(const SupportMatrix& m);
  /// Order 2 with f(ij) = weights(i,j) on allowed edges.
  static Potential from_edge_weights(TransitionMatrix base,
                                     const Eigen::MatrixXd& weights);

  const TransitionMatrix& base() const { return base_; }
  int order() const { return order_; }
  const std::vector<Word>& words() const { return words_; }
  const std::vector<double>& values() const { return values_; }

  double at(std::span<const int> word) const;
  /// Order-2 value on the edge ij.
  double edge(int i, int j) const { return edge_weights_(i, j); }
  /// Order-2 table as a matrix, zero off the support.
  const Eigen::MatrixXd& edge_weights() const;

  Potential scaled(double q) const;
  Potential shifted(double c) const;
  /// f o perm: the potential g(w) = f(perm(w)) on the relabeled base.
  Potential relabeled(std::span<const int> perm) const;

 private:
  TransitionMatrix base_;
  int order_;
  std::vector<Word> words_;
  std::vector<double> values_;
  Eigen::MatrixXd edge_weights_;
};

/// Order-2 form of a potential of any order. Order 1 is lifted with
/// f(ij) = f(i); order n >= 3 moves to the (n-1)-block recoded shift.
struct ReducedPotential {
  Potential edge;
  std::optional<HigherBlockCode> code;
};

ReducedPotential reduce_to_order2(const Potential& f,
                                  std::size_t cap = kDefaultEnumerationCap);

/// Perron data of A(q f) for an order-2 potential. Entries are computed as
/// exp(q f - shift) so large |q| does not overflow; the pressure adds the
/// shift back.
struct TransferData {
  SupportMatrix scaled;
  double shift = 0.0;
  PerronTriple perron;
  double log_root = 0.0;  // P(sigma, q f)
};

TransferData transfer_data(const Potential& f2, double q = 1.0,
                           const PerronOptions& options = {});

/// A(f): exp(f) on allowed edges, 0 elsewhere. Orders 1 and 2.
SupportMatrix edge_matrix(const Potential& f);

/// log of the Perron root of A(f) after reduction to order 2.
double pressure(const Potential& f);

/// log(s_n / s_(n-1)) with s_m = sum_i (A(f)^m)_(i, terminal).
double pressure_by_preimages(const Potential& f, int terminal, int depth);

class MarkovMeasure {
 public:
  MarkovMeasure(SupportMatrix transition, Eigen::VectorXd stationary);

  const SupportMatrix& transition() const { return transition_; }
  const Eigen::VectorXd& stationary() const { return stationary_; }
  int size() const { return transition_.size(); }

  /// mu([w]); zero for inadmissible words, one for the empty word.
  double cylinder(std::span<const int> word) const;
  double log_cylinder(std::span<const int> word) const;

 private:
  SupportMatrix transition_;
  Eigen::VectorXd stationary_;
};

/// Markov measure of P(f)_ij = exp(f_ij) v_j / (lambda v_i).
MarkovMeasure gibbs_markov(const Potential& f);

double cylinder_measure(const MarkovMeasure& mu, std::span<const int> word);

/// sum_{k<count} f(w_k ... w_(k+order-1)).
double birkhoff_sum(const Potential& f, std::span<const int> word, int count);

/// f + log u_i - log u_j with u the left Perron vector of A(f).
Potential normalize_potential(const Potential& f);

enum class JacobianKind { kEigenMeasure, kGibbs };

/// One-step Jacobian of nu_f or mu_f on the cylinder [w], |w| >= 2.
double jacobian(const Potential& f, std::span<const int> word,
                JacobianKind kind);

/// nu_f([w]) = mu_f([w]) / u_(w_0) with sum v = 1, u.v = 1.
double eigen_measure_cylinder(const Potential& f, std::span<const int> word);

struct GibbsAudit {
  double pressure = 0.0;
  double constant = 1.0;
  double theoretical_min = 1.0;  // least closed-form ratio
  double theoretical_max = 1.0;  // largest closed-form ratio
  double observed_min = 1.0;
  double observed_max = 1.0;
  int depth = 0;
  std::uint64_t cylinders = 0;
  bool within_bounds = false;
};

/// Ratios mu([w|m]) / exp(-m P + S_m f) over all w of length m + 1, m <= depth.
GibbsAudit gibbs_constant_audit(const Potential& f, int depth = 12,
                                std::size_t cap = kDefaultEnumerationCap);

/// -sum_i pi_i sum_j P_ij log P_ij.
double entropy_rate(const MarkovMeasure& mu);

}  // namespace multispec
