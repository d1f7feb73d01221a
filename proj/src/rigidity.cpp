#include "multispec/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "multispec/errors.hpp"
#include "multispec/random.hpp"

namespace multispec {

SupportMatrix bernoulli_matrix(double a, BernoulliKind kind) {
  if (!(a > 0.0 && a < 1.0))
    throw ValidationError("Bernoulli parameter must lie in (0, 1)");
  Eigen::Matrix2d m;
  if (kind == BernoulliKind::kP1)
    m << 1.0 - a, a, 1.0 - a, a;
  else
    m << 1.0 - a, a, a, 1.0 - a;
  return SupportMatrix(TransitionMatrix::full_shift(2), m);
}

std::string to_string(BernoulliKind kind) {
  return kind == BernoulliKind::kP1 ? "P1" : "P2";
}

std::string to_string(ShiftCase c) {
  switch (c) {
    case ShiftCase::kFullTwoShift: return "full-2-shift";
    case ShiftCase::kNonFullTwoByTwo: return "nonfull-2x2";
    case ShiftCase::kGeneral: return "general";
  }
  return "general";
}

std::string to_string(Orientation o) {
  return o == Orientation::kRightV ? "right-v" : "left-u";
}

namespace {

double relative_gap(double x, double y) {
  return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace

GnMembership g_n_membership(const Potential& f, double gap_tol) {
  GnMembership out;
  const auto reduced = reduce_to_order2(f);
  const Potential normalized = normalize_potential(reduced.edge);
  if (reduced.code) {
    // Recoded edges (u, w) correspond one-to-one to the original n-words.
    const auto& code = *reduced.code;
    for (std::size_t k = 0; k < normalized.words().size(); ++k) {
      out.words.push_back(code.translate(normalized.words()[k]));
      out.normalized.push_back(normalized.values()[k]);
    }
  } else {
    out.words = normalized.words();
    out.normalized = normalized.values();
  }

  std::vector<std::size_t> order(out.words.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.normalized[a] < out.normalized[b];
  });
  out.margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < order.size(); ++k)
    out.margin = std::min(out.margin, relative_gap(out.normalized[order[k]],
                                                   out.normalized[order[k + 1]]));
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const double gap =
          relative_gap(out.normalized[order[a]], out.normalized[order[b]]);
      // Values are sorted, so the gap only grows (up to the normalizer).
      if (gap > 2.0 * gap_tol) break;
      if (gap > gap_tol) continue;
      auto p = out.words[order[a]], q = out.words[order[b]];
      if (q < p) std::swap(p, q);
      out.collisions.emplace_back(std::move(p), std::move(q));
    }
  std::sort(out.collisions.begin(), out.collisions.end());
  out.member = out.collisions.empty();
  return out;
}

Potential bernoulli_twin(const Potential& f, double a, BernoulliKind kind) {
  if (!(f.base() == TransitionMatrix::full_shift(2)))
    throw ValidationError("Bernoulli twins exist only on the full 2-shift");
  if (std::abs(a - 0.5) <= kHalfWindow)
    throw ValidationError("P1(1/2) and P2(1/2) coincide; no twin exists");
  const auto other =
      kind == BernoulliKind::kP1 ? BernoulliKind::kP2 : BernoulliKind::kP1;
  return Potential::log_of(bernoulli_matrix(a, other));
}

RigidityReport classify_2x2(const Potential& f) {
  if (f.base().size() != 2)
    throw ValidationError("2x2 classification needs a 2-symbol shift, got " +
                          std::to_string(f.base().size()));
  if (f.order() > 2)
    throw ValidationError("2x2 classification covers potentials of order <= 2");
  RigidityReport report;
  const auto g2 = g_n_membership(f);
  report.g2_member = g2.member;
  report.g2_margin = g2.margin;
  report.condition_a1 = out_degrees(f.base()).condition_a1;

  if (!(f.base() == TransitionMatrix::full_shift(2))) {
    report.shift_case = ShiftCase::kNonFullTwoByTwo;
    report.strong_rigid = true;
    report.weak_rigid = true;
    return report;
  }
  report.shift_case = ShiftCase::kFullTwoShift;
  const auto p = gibbs_markov(f).transition().values();
  const double a = p(0, 1);
  std::optional<BernoulliKind> kind;
  if (std::abs(p(0, 0) - p(1, 0)) <= kRowMatchTolerance &&
      std::abs(p(0, 1) - p(1, 1)) <= kRowMatchTolerance)
    kind = BernoulliKind::kP1;
  else if (std::abs(p(1, 0) - p(0, 1)) <= kRowMatchTolerance &&
           std::abs(p(1, 1) - p(0, 0)) <= kRowMatchTolerance)
    kind = BernoulliKind::kP2;

  const bool exceptional = kind && std::abs(a - 0.5) > kHalfWindow;
  report.in_e = !exceptional;
  report.strong_rigid = !exceptional;
  report.weak_rigid = !exceptional;
  if (kind) {
    report.detected_kind = kind;
    report.detected_alpha = a;
  }
  if (exceptional) report.twin = bernoulli_twin(f, a, *kind);
  return report;
}

RigidityReport classify(const Potential& f) {
  if (f.base().size() == 2 && f.order() <= 2) return classify_2x2(f);
  RigidityReport report;
  report.shift_case = ShiftCase::kGeneral;
  const auto g2 = g_n_membership(f);
  report.g2_member = g2.member;
  report.g2_margin = g2.margin;
  report.condition_a1 = out_degrees(f.base()).condition_a1;
  return report;
}

AppendixCheck appendix_condition_check(const SupportMatrix& a,
                                       Orientation orientation, double tol) {
  const auto f = Potential::log_of(a);
  const auto fhat = normalize_potential(f);
  const auto triple = perron(a);
  const auto& v = triple.right;
  const auto& u = triple.left;
  const auto words = admissible_words(a.base(), 2);

  AppendixCheck out;
  out.orientation = orientation;
  for (const auto& ij : words)
    for (const auto& kl : words) {
      if (ij == kl) continue;
      const int i = ij[0], j = ij[1], k = kl[0], l = kl[1];
      const double ratio = a(i, j) / a(k, l);
      const double eigen = orientation == Orientation::kRightV
                               ? v(i) * v(l) / (v(j) * v(k))
                               : u(j) * u(k) / (u(i) * u(l));
      AppendixPairCheck check;
      check.first = ij;
      check.second = kl;
      check.expression = ratio - eigen;
      check.zero = std::abs(check.expression) <=
                   tol * std::max({1.0, std::abs(ratio), std::abs(eigen)});
      check.definitional_collision =
          relative_gap(fhat.edge(i, j), fhat.edge(k, l)) <= tol;
      check.agrees = check.zero == check.definitional_collision;
      if (!check.agrees) ++out.discrepancies;
      out.pairs.push_back(std::move(check));
    }
  return out;
}

DensityProbe density_probe(const Potential& f, double eps, std::size_t trials,
                           std::uint64_t seed, double gap_tol) {
  if (f.order() != 2)
    throw ValidationError("density probe perturbs order-2 potentials");
  DensityProbe out;
  out.trials = trials;
  auto perturb = [&](const std::vector<double>& values, double radius,
                     std::mt19937_64& engine) {
    auto next = values;
    for (double& x : next) x += radius * (2.0 * uniform01(engine) - 1.0);
    return Potential(f.base(), 2, std::move(next));
  };
  for (std::size_t t = 0; t < trials; ++t) {
    auto engine = stream_engine(seed, t);
    const auto candidate = perturb(f.values(), eps, engine);
    if (!g_n_membership(candidate, gap_tol).member) continue;
    ++out.members;
    for (int sub = 0; sub < 10; ++sub) {
      ++out.openness_checks;
      const auto nearby = perturb(candidate.values(), eps / 100.0, engine);
      if (!g_n_membership(nearby, gap_tol).member) ++out.openness_failures;
    }
  }
  out.fraction = trials == 0 ? 0.0
                             : static_cast<double>(out.members) /
                                   static_cast<double>(trials);
  return out;
}

}  // namespace multispec
