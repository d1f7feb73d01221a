#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "multispec/errors.hpp"
#include "multispec/perron.hpp"

using namespace multispec;
using doctest::Approx;

namespace {

SupportMatrix m2(const TransitionMatrix& base, double a, double b, double c,
                 double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return SupportMatrix(base, m);
}

}  // namespace

TEST_CASE("support matrices must match their base") {
  CHECK_THROWS_AS(m2(fixtures::golden(), 1, 1, 1, 1), ValidationError);
  CHECK_THROWS_AS(m2(fixtures::full2(), 1, 0, 1, 1), ValidationError);
  CHECK_NOTHROW(m2(fixtures::golden(), 1, 2, 3, 0));
}

TEST_CASE("perron on closed-form examples") {
  const auto ones = perron(m2(fixtures::full2(), 1, 1, 1, 1));
  CHECK(ones.root == Approx(2.0).epsilon(1e-14));
  CHECK(ones.right(0) == Approx(0.5));
  CHECK(ones.right(1) == Approx(0.5));

  const auto g = perron(SupportMatrix(fixtures::golden(),
                                      fixtures::golden().as_real()));
  CHECK(g.root == Approx(fixtures::kPhi).epsilon(1e-14));
  CHECK(g.right(0) == Approx(1.0 / fixtures::kPhi).epsilon(1e-13));
  CHECK(g.right(1) == Approx(1.0 - 1.0 / fixtures::kPhi).epsilon(1e-13));
  CHECK(g.residual <= 1e-13);

  // A(f) for f = log P1(1/3): rank one, root 1, u = (4/3, 2/3) with u.v = 1.
  const auto p = perron(m2(fixtures::full2(), 2.0 / 3, 1.0 / 3, 2.0 / 3, 1.0 / 3));
  CHECK(p.root == Approx(1.0).epsilon(1e-14));
  CHECK(p.right(0) == Approx(0.5).epsilon(1e-13));
  CHECK(p.left(0) == Approx(4.0 / 3).epsilon(1e-13));
  CHECK(p.left(1) == Approx(2.0 / 3).epsilon(1e-13));
  CHECK(p.left.dot(p.right) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("perron handles nearly reducible matrices") {
  // Two loops with almost equal weight and tiny cross edges: |l2|/l1 ~ 1.
  Eigen::Matrix2d m;
  m << 1.0, 1e-12, 1e-12, 0.999999;
  const auto t = perron(SupportMatrix(fixtures::full2(), m));
  const double disc = std::sqrt(std::pow(1.0 - 0.999999, 2) + 4e-24);
  CHECK(t.root == Approx((1.999999 + disc) / 2).epsilon(1e-14));
  CHECK(t.residual <= 1e-12);
}

TEST_CASE("power iteration and the linear solve agree on random matrices") {
  std::uint64_t seed = 1;
  for (int n = 2; n <= 6; ++n)
    for (int rep = 0; rep < 20; ++rep, ++seed) {
      const auto base = fixtures::random_transition(n, seed);
      const auto m = fixtures::random_support_matrix(base, seed * 7919);
      const auto t = perron(m);
      const auto v = perron_vector_by_linear_solve(m, t.root);
      CHECK((v - t.right).lpNorm<Eigen::Infinity>() <= 1e-10);
      CHECK(t.root == Approx(fixtures::spectral_radius(m.values()))
                          .epsilon(1e-12));
      CHECK(t.right.sum() == Approx(1.0).epsilon(1e-14));
      CHECK(t.left.dot(t.right) == Approx(1.0).epsilon(1e-13));
      CHECK(t.left.minCoeff() > 0.0);
    }
}

TEST_CASE("linear solve on closed forms") {
  const auto ones = m2(fixtures::full2(), 1, 1, 1, 1);
  const auto v = perron_vector_by_linear_solve(ones, 2.0);
  CHECK(v(0) == Approx(0.5).epsilon(1e-14));
  const auto g = SupportMatrix(fixtures::golden(), fixtures::golden().as_real());
  const auto vg = perron_vector_by_linear_solve(g, fixtures::kPhi);
  CHECK(vg(0) == Approx(1.0 / fixtures::kPhi).epsilon(1e-13));
  CHECK(vg(1) == Approx(1.0 - 1.0 / fixtures::kPhi).epsilon(1e-13));
}

TEST_CASE("root of powers is the power of the root") {
  for (std::uint64_t seed = 11; seed < 31; ++seed) {
    const auto base = fixtures::random_transition(4, seed);
    const auto m = fixtures::random_support_matrix(base, seed);
    const double root = perron(m).root;
    Eigen::MatrixXd power = m.values();
    for (int k = 2; k <= 3; ++k) {
      power = power * m.values();
      // A^k is positive exactly where (A^k) has support; rebuild its base.
      ZeroOneArray support(4, std::vector<int>(4, 0));
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) support[i][j] = power(i, j) > 0 ? 1 : 0;
      const auto pk = perron(SupportMatrix(TransitionMatrix(support), power));
      CHECK(pk.root == Approx(std::pow(root, k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("stochastic matrices: root 1, uniform v, u proportional to pi") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto base = fixtures::random_transition(3 + seed % 3, seed);
    Eigen::MatrixXd p = fixtures::random_support_matrix(base, seed).values();
    for (int i = 0; i < p.rows(); ++i) p.row(i) /= p.row(i).sum();
    const SupportMatrix sp(base, p);
    const auto t = perron(sp);
    CHECK(t.root == Approx(1.0).epsilon(1e-12));
    const double n = static_cast<double>(p.rows());
    CHECK((t.right.array() - 1.0 / n).abs().maxCoeff() <= 1e-12);
    const auto pi = stationary_distribution(sp);
    CHECK((t.left / t.left.sum() - pi).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("stationary distributions") {
  const auto p1 = stationary_distribution(
      m2(fixtures::full2(), 2.0 / 3, 1.0 / 3, 2.0 / 3, 1.0 / 3));
  CHECK(p1(0) == Approx(2.0 / 3).epsilon(1e-14));
  const auto c = stationary_distribution(m2(fixtures::full2(), 0.7, 0.3, 0.4, 0.6));
  CHECK(c(0) == Approx(4.0 / 7).epsilon(1e-14));
  CHECK(c(1) == Approx(3.0 / 7).epsilon(1e-14));
  const auto p2 = stationary_distribution(
      m2(fixtures::full2(), 2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3));
  CHECK(p2(0) == Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(stationary_distribution(m2(fixtures::full2(), 0.7, 0.4, 0.4, 0.6)),
                  ValidationError);
}

TEST_CASE("perron derivative matches closed forms and finite differences") {
  const Eigen::Matrix2d f = (Eigen::Matrix2d() << std::log(2.0 / 3), std::log(1.0 / 3),
                             std::log(2.0 / 3), std::log(1.0 / 3))
                                .finished();
  const TransitionMatrix full = fixtures::full2();
  MatrixFamily tilt{
      [&](double q) {
        return SupportMatrix(full, (q * f).array().exp().matrix());
      },
      [&](double q) -> Eigen::MatrixXd {
        return f.cwiseProduct((q * f).array().exp().matrix());
      }};
  CHECK(perron_derivative(tilt, 0.0) ==
        Approx(std::log(2.0 / 9)).epsilon(1e-12));

  MatrixFamily constant{
      [&](double) { return SupportMatrix(fixtures::golden(), fixtures::golden().as_real()); },
      [&](double) -> Eigen::MatrixXd { return Eigen::MatrixXd::Zero(2, 2); }};
  CHECK(perron_derivative(constant, 0.3) == 0.0);

  MatrixFamily scale{
      [&](double q) {
        return SupportMatrix(fixtures::golden(),
                             std::exp(q) * fixtures::golden().as_real());
      },
      [&](double q) -> Eigen::MatrixXd {
        return std::exp(q) * fixtures::golden().as_real();
      }};
  CHECK(perron_derivative(scale, 0.7) ==
        Approx(fixtures::kPhi * std::exp(0.7)).epsilon(1e-12));

  // Seeded families q -> exp(q W) on random bases vs central differences.
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto base = fixtures::random_transition(2 + seed % 4, seed + 500);
    const Eigen::MatrixXd w =
        fixtures::random_potential(base, seed).edge_weights();
    MatrixFamily fam{
        [&](double q) {
          Eigen::MatrixXd m = (q * w).array().exp().matrix();
          for (int i = 0; i < base.size(); ++i)
            for (int j = 0; j < base.size(); ++j)
              if (!base.allowed(i, j)) m(i, j) = 0.0;
          return SupportMatrix(base, m);
        },
        [&](double q) -> Eigen::MatrixXd {
          Eigen::MatrixXd m = w.cwiseProduct((q * w).array().exp().matrix());
          for (int i = 0; i < base.size(); ++i)
            for (int j = 0; j < base.size(); ++j)
              if (!base.allowed(i, j)) m(i, j) = 0.0;
          return m;
        }};
    const double q0 = -1.5 + 0.2 * static_cast<double>(seed);
    const double h = 1e-6;
    const double fd =
        (perron(fam.value(q0 + h)).root - perron(fam.value(q0 - h)).root) /
        (2 * h);
    CHECK(perron_derivative(fam, q0) == Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("Karp cycle means") {
  Eigen::Matrix2d w;
  w << 1.0, 0.0, 3.0, 0.0;
  auto g = cycle_mean_extremes(fixtures::golden(), w);
  CHECK(g.min_mean == Approx(1.0));
  CHECK(g.max_mean == Approx(1.5));
  CHECK(g.min_cycle == Word{0});
  CHECK(cycle_mean(w, g.max_cycle) == Approx(1.5));

  const auto f = fixtures::log_p1(1.0 / 3).edge_weights();
  auto p = cycle_mean_extremes(fixtures::full2(), f);
  CHECK(p.min_mean == Approx(std::log(1.0 / 3)).epsilon(1e-14));
  CHECK(p.max_mean == Approx(std::log(2.0 / 3)).epsilon(1e-14));

  auto c = cycle_mean_extremes(fixtures::ring3(),
                               Eigen::MatrixXd::Constant(3, 3, 0.25));
  CHECK(c.min_mean == Approx(0.25));
  CHECK(c.max_mean == Approx(0.25));
}

TEST_CASE("Karp agrees with cycle enumeration and is antisymmetric") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto base = fixtures::random_transition(2 + seed % 5, seed * 31);
    const Eigen::MatrixXd w =
        fixtures::random_potential(base, seed, 2, 3.0).edge_weights();
    const auto k = cycle_mean_extremes(base, w);
    const auto [lo, hi] = fixtures::brute_cycle_means(base, w);
    CHECK(k.min_mean == Approx(lo).epsilon(1e-12));
    CHECK(k.max_mean == Approx(hi).epsilon(1e-12));
    CHECK(k.min_mean <= k.max_mean);
    CHECK(cycle_mean(w, k.min_cycle) == Approx(k.min_mean).epsilon(1e-12));
    CHECK(cycle_mean(w, k.max_cycle) == Approx(k.max_mean).epsilon(1e-12));
    const auto neg = cycle_mean_extremes(base, -w);
    CHECK(neg.min_mean == Approx(-k.max_mean).epsilon(1e-12));
    CHECK(neg.max_mean == Approx(-k.min_mean).epsilon(1e-12));
  }
}
