#include "multispec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "multispec/errors.hpp"

namespace multispec {

BetaFunction::BetaFunction(const Potential& f)
    : f2_(reduce_to_order2(f).edge), pressure_(transfer_data(f2_).log_root) {}

double BetaFunction::operator()(double q) const {
  return transfer_data(f2_, q).log_root - q * pressure_;
}

double BetaFunction::derivative(double q) const {
  const auto data = transfer_data(f2_, q);
  // d log(root)/dq = u (f o A) v / (root u v), invariant under the shift.
  const Eigen::MatrixXd da =
      f2_.edge_weights().cwiseProduct(data.scaled.values());
  const double dlog = perron_derivative(data.perron, da) / data.perron.root;
  return dlog - pressure_;
}

double BetaFunction::second_derivative(double q, double step) const {
  return (derivative(q + step) - derivative(q - step)) / (2.0 * step);
}

double BetaFunction::alpha_by_integral(double q) const {
  const auto mu = gibbs_markov(f2_.scaled(q));
  const auto& p = mu.transition().values();
  const auto& w = f2_.edge_weights();
  double integral = 0.0;
  for (int i = 0; i < mu.size(); ++i)
    for (int j = 0; j < mu.size(); ++j)
      if (p(i, j) > 0.0) integral += mu.stationary()(i) * p(i, j) * w(i, j);
  return pressure_ - integral;
}

double beta(const Potential& f, double q) { return BetaFunction(f)(q); }
double alpha(const Potential& f, double q) { return BetaFunction(f).alpha(q); }

AlphaRange alpha_range(const Potential& f) {
  const auto reduced = reduce_to_order2(f).edge;
  const double p = pressure(reduced);
  const auto extremes =
      cycle_mean_extremes(reduced.base(), reduced.edge_weights());
  AlphaRange out;
  out.alpha_min = p - extremes.max_mean;
  out.alpha_max = p - extremes.min_mean;
  out.degenerate = out.alpha_max - out.alpha_min <= kDegenerateWidth;
  out.min_cycle = extremes.max_cycle;
  out.max_cycle = extremes.min_cycle;
  return out;
}

namespace {

// beta(q) + q alpha at the largest |q| <= cap whose edge weights stay
// representable, with the same quantity at half that q for comparison.
SpectrumValue endpoint_value(const BetaFunction& b, double alpha, double sign,
                             double q_cap) {
  double q = q_cap;
  for (int attempt = 0; attempt < 60; ++attempt, q /= 2.0) {
    try {
      const double at_cap = b(sign * q) + sign * q * alpha;
      const double at_half = b(sign * q / 2.0) + sign * q / 2.0 * alpha;
      SpectrumValue out;
      out.value = at_cap;
      out.q_star = sign * q;
      out.endpoint_extrapolated = true;
      out.richardson_gap = std::abs(at_cap - at_half);
      return out;
    } catch (const ConvergenceError&) {
    }
  }
  throw ConvergenceError("could not evaluate the spectrum endpoint");
}

}  // namespace

SpectrumValue entropy_spectrum(const Potential& f, double alpha,
                               const SpectrumOptions& options) {
  const BetaFunction b(f);
  const auto range = alpha_range(f);
  SpectrumValue out;
  const double slack = 1e-12 * std::max(1.0, std::abs(alpha));

  if (range.degenerate) {
    out.degenerate = true;
    if (std::abs(alpha - range.alpha_min) <= kDegenerateWidth) {
      out.value = b(0.0);
      out.q_star = 0.0;
    } else {
      out.outside_range = true;
    }
    return out;
  }
  if (alpha < range.alpha_min - slack || alpha > range.alpha_max + slack) {
    out.outside_range = true;
    return out;
  }
  if (std::abs(alpha - range.alpha_min) <= slack)
    return endpoint_value(b, range.alpha_min, +1.0, options.q_cap);
  if (std::abs(alpha - range.alpha_max) <= slack)
    return endpoint_value(b, range.alpha_max, -1.0, options.q_cap);

  // alpha(q) is strictly decreasing; bracket alpha(lo) >= alpha >= alpha(hi).
  double lo = -1.0, hi = 1.0;
  while (b.alpha(hi) > alpha) {
    lo = hi;
    hi *= 2.0;
    if (hi > options.q_cap) {
      std::ostringstream msg;
      msg << "no q <= " << options.q_cap << " reaches alpha = " << alpha
          << " (alpha_min = " << range.alpha_min << ")";
      throw ConvergenceError(msg.str());
    }
  }
  while (b.alpha(lo) < alpha) {
    hi = lo;
    lo *= 2.0;
    if (lo < -options.q_cap) {
      std::ostringstream msg;
      msg << "no q >= " << -options.q_cap << " reaches alpha = " << alpha
          << " (alpha_max = " << range.alpha_max << ")";
      throw ConvergenceError(msg.str());
    }
  }
  while (hi - lo > options.bracket_width) {
    const double mid = 0.5 * (lo + hi);
    (b.alpha(mid) > alpha ? lo : hi) = mid;
  }
  double q = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double slope = -b.second_derivative(q);
    if (!(slope < 0.0)) break;
    const double next = std::clamp(q - (b.alpha(q) - alpha) / slope, lo, hi);
    const double step = std::abs(next - q);
    q = next;
    if (step <= options.newton_tol * std::max(1.0, std::abs(q))) break;
  }
  out.q_star = q;
  out.value = b(q) + q * alpha;
  return out;
}

SpectrumCurve sample_spectrum(const Potential& f,
                              const std::vector<double>& q_grid) {
  if (!std::is_sorted(q_grid.begin(), q_grid.end()))
    throw ValidationError("q grid must be sorted");
  const BetaFunction b(f);
  const auto range = alpha_range(f);
  SpectrumCurve curve;
  curve.alpha_min = range.alpha_min;
  curve.alpha_max = range.alpha_max;
  curve.degenerate = range.degenerate;
  curve.topological_entropy = b(0.0);
  curve.gibbs_entropy = entropy_rate(gibbs_markov(b.edge_potential()));

  auto make_sample = [&](double q) {
    SpectrumSample s;
    s.q = q;
    s.alpha = b.alpha(q);
    s.beta = b(q);
    s.entropy = s.beta + q * s.alpha;
    s.entropy_check =
        entropy_rate(gibbs_markov(b.edge_potential().scaled(q)));
    if (std::abs(s.entropy - s.entropy_check) > kDualityTolerance)
      s.flags.emplace_back("entropy_mismatch");
    return s;
  };

  if (range.degenerate) {
    auto s = make_sample(0.0);
    s.flags.emplace_back("degenerate");
    curve.samples.push_back(std::move(s));
    return curve;
  }
  curve.samples.reserve(q_grid.size());
  for (double q : q_grid) curve.samples.push_back(make_sample(q));
  return curve;
}

std::vector<double> uniform_grid(double qmin, double qmax, double step) {
  if (!(step > 0.0) || qmax < qmin)
    throw ValidationError("grid needs qmin <= qmax and a positive step");
  const long count = std::lround(std::floor((qmax - qmin) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count) + 1);
  for (long k = 0; k <= count; ++k) grid.push_back(qmin + k * step);
  return grid;
}

std::vector<double> default_comparison_grid() {
  return uniform_grid(-20.0, 20.0, 0.25);
}

namespace {

std::vector<double> witness_order(const std::vector<double>& grid) {
  std::vector<double> integers, rest;
  for (double q : grid)
    (q == std::round(q) && q != 0.0 && q != 1.0 ? integers : rest).push_back(q);
  // 2, -1, 3, -2, ...: distance from the always-equal pair {0, 1}.
  std::stable_sort(integers.begin(), integers.end(), [](double x, double y) {
    const double dx = x >= 1.0 ? x - 1.0 : -x;
    const double dy = y >= 1.0 ? y - 1.0 : -y;
    if (dx != dy) return dx < dy;
    return x > y;
  });
  std::sort(rest.begin(), rest.end());
  integers.insert(integers.end(), rest.begin(), rest.end());
  return integers;
}

}  // namespace

SpectraComparison spectra_equal(const Potential& f, const Potential& g,
                                const std::vector<double>& q_grid,
                                double tol) {
  const BetaFunction bf(f), bg(g);
  SpectraComparison out;
  for (double q : witness_order(q_grid)) {
    const double gap = std::abs(bf(q) - bg(q));
    out.max_beta_gap = std::max(out.max_beta_gap, gap);
    if (gap > tol && !out.witness_q) {
      out.witness_q = q;
      out.witness_gap = gap;
    }
  }
  const auto rf = alpha_range(f), rg = alpha_range(g);
  out.alpha_min_gap = std::abs(rf.alpha_min - rg.alpha_min);
  out.alpha_max_gap = std::abs(rf.alpha_max - rg.alpha_max);
  if (out.witness_q) {
    out.reason = "beta differs on the grid";
  } else if (out.alpha_min_gap > tol || out.alpha_max_gap > tol) {
    out.reason = "alpha-range endpoints differ";
  } else {
    out.equal = true;
    out.reason = "beta agrees on the grid and the alpha ranges coincide";
  }
  return out;
}

}  // namespace multispec
