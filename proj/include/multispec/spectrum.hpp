#pragma once

// The beta function q -> P(sigma, q f) - q P(sigma, f) and the entropy
// spectrum obtained from it by Legendre transform.

#include <optional>
#include <string>
#include <vector>

#include "multispec/thermo.hpp"

namespace multispec {

class BetaFunction {
 public:
  explicit BetaFunction(const Potential& f);

  /// Order-2 form of the potential (possibly on a recoded shift).
  const Potential& edge_potential() const { return f2_; }
  double pressure() const { return pressure_; }

  double operator()(double q) const;
  /// beta'(q) from the derivative of the Perron root.
  double derivative(double q) const;
  /// beta''(q) as a central difference of derivative().
  double second_derivative(double q, double step = 1e-4) const;
  /// alpha(q) = -beta'(q).
  double alpha(double q) const { return -derivative(q); }
  /// P(f) - integral of f against the Gibbs measure of q f.
  double alpha_by_integral(double q) const;

 private:
  Potential f2_;
  double pressure_;
};

double beta(const Potential& f, double q);
double alpha(const Potential& f, double q);

struct AlphaRange {
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  bool degenerate = false;
  Word min_cycle;  // cycle of largest mean f (realizes alpha_min)
  Word max_cycle;  // cycle of least mean f (realizes alpha_max)
};

inline constexpr double kDegenerateWidth = 1e-10;

AlphaRange alpha_range(const Potential& f);

struct SpectrumOptions {
  double q_cap = 200.0;
  double bracket_width = 1e-6;
  double newton_tol = 1e-12;
};

struct SpectrumValue {
  double value = 0.0;
  std::optional<double> q_star;
  bool outside_range = false;
  bool endpoint_extrapolated = false;
  bool degenerate = false;
  /// |E(Q) - E(Q/2)| for endpoint evaluations.
  double richardson_gap = 0.0;
};

/// E(alpha) = inf_q (beta(q) + q alpha); zero outside [alpha_min, alpha_max].
SpectrumValue entropy_spectrum(const Potential& f, double alpha,
                               const SpectrumOptions& options = {});

struct SpectrumSample {
  double q = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double entropy = 0.0;        // E(alpha(q)) = beta(q) + q alpha(q)
  double entropy_check = 0.0;  // entropy rate of the Gibbs measure of q f
  std::vector<std::string> flags;
};

struct SpectrumCurve {
  std::vector<SpectrumSample> samples;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  bool degenerate = false;
  double topological_entropy = 0.0;  // beta(0)
  double gibbs_entropy = 0.0;        // entropy rate of mu_f
};

inline constexpr double kDualityTolerance = 1e-8;

SpectrumCurve sample_spectrum(const Potential& f,
                              const std::vector<double>& q_grid);

/// qmin, qmin + step, ..., qmax (inclusive up to rounding).
std::vector<double> uniform_grid(double qmin, double qmax, double step);
std::vector<double> default_comparison_grid();  // [-20, 20] step 0.25

struct SpectraComparison {
  bool equal = false;
  std::optional<double> witness_q;
  double witness_gap = 0.0;
  double max_beta_gap = 0.0;
  double alpha_min_gap = 0.0;
  double alpha_max_gap = 0.0;
  std::string reason;
};

/// Tolerance-based comparison of two entropy spectra through beta on a grid
/// and the exact alpha-range endpoints. A distinct verdict carries a witness
/// q, preferring integer grid points ordered 2, -1, 3, -2, ... and then the
/// remaining grid points in ascending order.
SpectraComparison spectra_equal(const Potential& f, const Potential& g,
                                const std::vector<double>& q_grid,
                                double tol = 1e-9);

}  // namespace multispec
