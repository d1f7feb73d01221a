#pragma once

// Rigidity classification of Gibbs measures: Bernoulli/reflection twins on
// the full 2-shift, automatic rigidity on the other 2x2 shifts, and the G_n
// genericity condition.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multispec/thermo.hpp"

namespace multispec {

/// P1(a) = [[1-a, a], [1-a, a]] (Bernoulli), P2(a) = [[1-a, a], [a, 1-a]].
enum class BernoulliKind { kP1, kP2 };

SupportMatrix bernoulli_matrix(double a, BernoulliKind kind);
std::string to_string(BernoulliKind kind);

enum class ShiftCase { kFullTwoShift, kNonFullTwoByTwo, kGeneral };
std::string to_string(ShiftCase c);

inline constexpr double kRowMatchTolerance = 1e-10;
inline constexpr double kHalfWindow = 1e-10;
inline constexpr double kDefaultGapTolerance = 1e-9;

struct GnMembership {
  bool member = false;
  double margin = 0.0;  // least relative gap between consecutive sorted values
  std::vector<std::pair<Word, Word>> collisions;
  std::vector<Word> words;            // W_A^n
  std::vector<double> normalized;     // f-hat on `words`
};

/// Whether f-hat takes pairwise distinct values on n-words, with relative
/// gap |x - y| / max(1, |x|, |y|) above `gap_tol`.
GnMembership g_n_membership(const Potential& f,
                            double gap_tol = kDefaultGapTolerance);

struct RigidityReport {
  ShiftCase shift_case = ShiftCase::kGeneral;
  std::optional<bool> in_e;
  std::optional<Potential> twin;
  std::optional<BernoulliKind> detected_kind;
  std::optional<double> detected_alpha;
  std::optional<bool> strong_rigid;
  std::optional<bool> weak_rigid;
  bool g2_member = false;
  double g2_margin = 0.0;
  bool condition_a1 = false;
};

/// Full verdicts for 2x2 bases with order <= 2 potentials.
RigidityReport classify_2x2(const Potential& f);
/// classify_2x2 where it applies, else the partial (G_n, condition) report.
RigidityReport classify(const Potential& f);

/// log P2(a) for kind P1, log P1(a) for kind P2.
Potential bernoulli_twin(const Potential& f, double a, BernoulliKind kind);

enum class Orientation { kRightV, kLeftU };
std::string to_string(Orientation o);

struct AppendixPairCheck {
  Word first;   // ij
  Word second;  // kl
  double expression = 0.0;
  bool zero = false;
  bool definitional_collision = false;
  bool agrees = false;
};

struct AppendixCheck {
  Orientation orientation = Orientation::kRightV;
  std::vector<AppendixPairCheck> pairs;
  std::size_t discrepancies = 0;
};

/// A(ij)/A(kl) - v_i v_l / (v_j v_k) (right) or A(ij)/A(kl) - u_j u_k /
/// (u_i u_l) (left) over ordered pairs of distinct 2-words, compared with the
/// collision test on f-hat for f = log A.
AppendixCheck appendix_condition_check(const SupportMatrix& a,
                                       Orientation orientation,
                                       double tol = kDefaultGapTolerance);

struct DensityProbe {
  double fraction = 0.0;
  std::size_t members = 0;
  std::size_t trials = 0;
  std::size_t openness_checks = 0;
  std::size_t openness_failures = 0;
};

/// Fraction of uniform [-eps, eps] perturbations of the 2-word values that
/// land in G_2. Each member found is re-probed 10 times at radius eps / 100.
DensityProbe density_probe(const Potential& f, double eps, std::size_t trials,
                           std::uint64_t seed,
                           double gap_tol = kDefaultGapTolerance);

}  // namespace multispec
