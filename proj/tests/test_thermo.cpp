#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "multispec/errors.hpp"
#include "multispec/thermo.hpp"

using namespace multispec;
using doctest::Approx;

namespace {

Word w(std::string_view s) { return parse_word(s, 9); }

std::vector<Potential> n2_potentials() {
  return {fixtures::log_p1(1.0 / 3), fixtures::log_p2(1.0 / 3),
          fixtures::log_chain07(),
          Potential::constant(fixtures::golden(), 0.0),
          fixtures::random_potential(fixtures::full2(), 3),
          fixtures::random_potential(fixtures::golden(), 4),
          fixtures::random_potential(fixtures::reverse_golden(), 5)};
}

// Eigen-based Perron vectors, independent of perron().
struct Eig {
  double root;
  Eigen::VectorXd v, u;  // sum v = 1, u.v = 1
};

Eig eig(const Eigen::MatrixXd& a) {
  auto pick = [](const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> s(m);
    int best = 0;
    for (int i = 1; i < m.rows(); ++i)
      if (s.eigenvalues()(i).real() > s.eigenvalues()(best).real()) best = i;
    Eigen::VectorXd x = s.eigenvectors().col(best).real();
    return std::pair{s.eigenvalues()(best).real(), Eigen::VectorXd(x / x.sum())};
  };
  auto [root, v] = pick(a);
  auto [root_t, u] = pick(a.transpose());
  (void)root_t;
  return {root, v, u / u.dot(v)};
}

}  // namespace

TEST_CASE("potentials are total tables over admissible words") {
  std::map<Word, double> table{{w("11"), 1.0}, {w("12"), 2.0}};
  CHECK_THROWS_AS(Potential::from_words(fixtures::golden(), 2, table),
                  ValidationError);
  table[w("21")] = 3.0;
  const auto f = Potential::from_words(fixtures::golden(), 2, table);
  CHECK(f.at(w("21")) == 3.0);
  table[w("22")] = 4.0;
  CHECK_THROWS_AS(Potential::from_words(fixtures::golden(), 2, table),
                  ValidationError);
  CHECK_THROWS_AS(f.at(w("22")), ValidationError);
}

TEST_CASE("edge matrix and pressure on closed forms") {
  const auto zero = Potential::constant(fixtures::full2(), 0.0);
  CHECK(edge_matrix(zero).values() == Eigen::MatrixXd::Ones(2, 2));
  CHECK(pressure(zero) == Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(pressure(Potential::constant(fixtures::golden(), 0.0)) ==
        Approx(std::log(fixtures::kPhi)).epsilon(1e-14));
  CHECK(pressure(Potential::constant(fixtures::ring3(), 0.0)) ==
        Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(std::abs(pressure(fixtures::log_p1(1.0 / 3))) <= 1e-14);
  CHECK(std::abs(pressure(fixtures::log_chain07())) <= 1e-14);
}

TEST_CASE("pressure agrees with the eigensolver oracle") {
  for (const auto& base : fixtures::test_bases())
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto f = fixtures::random_potential(base, seed, 2, 2.0);
      CHECK(pressure(f) == Approx(fixtures::pressure_oracle(f)).epsilon(1e-12));
    }
}

TEST_CASE("order-1 and order-3 potentials reduce to order 2") {
  const auto f1 = Potential(fixtures::golden(), 1, {0.3, -0.2});
  const auto r1 = reduce_to_order2(f1);
  CHECK_FALSE(r1.code.has_value());
  CHECK(r1.edge.edge(1, 0) == -0.2);
  CHECK(r1.edge.edge(0, 1) == 0.3);

  const auto f3 = fixtures::random_potential(fixtures::full2(), 9, 3);
  const auto r3 = reduce_to_order2(f3);
  REQUIRE(r3.code.has_value());
  CHECK(r3.edge.base().size() == 4);
  CHECK_THROWS_AS(edge_matrix(f3), ValidationError);
}

TEST_CASE("preimage pressure converges to the Perron pressure") {
  for (const auto& base : {fixtures::full2(), fixtures::golden(), fixtures::ring3()})
    for (std::uint64_t seed = 20; seed < 25; ++seed) {
      const auto f = fixtures::random_potential(base, seed);
      const double p = fixtures::pressure_oracle(f);
      for (int t = 0; t < base.size(); ++t) {
        CHECK(std::abs(pressure_by_preimages(f, t, 60) - p) <= 1e-8);
      }
    }
  CHECK_THROWS_AS(pressure_by_preimages(fixtures::log_p1(0.3), 2, 10),
                  ValidationError);
}

TEST_CASE("gibbs_markov of the zero potential is the Parry measure") {
  const auto mu = gibbs_markov(Potential::constant(fixtures::golden(), 0.0));
  const double phi = fixtures::kPhi;
  CHECK(mu.transition()(0, 0) == Approx(1 / phi).epsilon(1e-13));
  CHECK(mu.transition()(0, 1) == Approx(1 / (phi * phi)).epsilon(1e-13));
  CHECK(mu.transition()(1, 0) == Approx(1.0).epsilon(1e-14));
  CHECK(mu.stationary()(0) == Approx(phi * phi / (1 + phi * phi)).epsilon(1e-13));
  CHECK(entropy_rate(mu) == Approx(std::log(phi)).epsilon(1e-13));
}

TEST_CASE("gibbs_markov recovers stochastic potentials") {
  const auto mu = gibbs_markov(fixtures::log_chain07());
  CHECK(mu.transition()(0, 0) == Approx(0.7).epsilon(1e-14));
  CHECK(mu.transition()(1, 0) == Approx(0.4).epsilon(1e-14));
  CHECK(mu.stationary()(0) == Approx(4.0 / 7).epsilon(1e-13));
}

TEST_CASE("gibbs_markov matches an eigensolver construction for tilted potentials") {
  for (const auto& base : fixtures::test_bases())
    for (int qi = -5; qi <= 5; ++qi) {
      const auto f = fixtures::random_potential(base, 77).scaled(qi);
      const auto mu = gibbs_markov(f);
      const Eigen::MatrixXd a = edge_matrix(f).values();
      const auto e = eig(a);
      for (int i = 0; i < base.size(); ++i) {
        CHECK(mu.stationary()(i) ==
              Approx(e.u(i) * e.v(i)).epsilon(1e-10));
        for (int j = 0; j < base.size(); ++j)
          CHECK(mu.transition()(i, j) ==
                Approx(a(i, j) * e.v(j) / (e.root * e.v(i))).epsilon(1e-10));
      }
    }
}

TEST_CASE("cylinder masses") {
  const auto mu = gibbs_markov(fixtures::log_p1(1.0 / 3));
  CHECK(cylinder_measure(mu, w("12")) == Approx(2.0 / 9).epsilon(1e-14));
  CHECK(cylinder_measure(mu, w("112")) == Approx(4.0 / 27).epsilon(1e-14));
  CHECK(cylinder_measure(mu, Word{}) == 1.0);

  const auto g = gibbs_markov(Potential::constant(fixtures::golden(), 0.0));
  CHECK(cylinder_measure(g, w("122")) == 0.0);

  for (const auto& base : fixtures::test_bases()) {
    const auto m = gibbs_markov(fixtures::random_potential(base, 5));
    for (int len = 1; len <= 5; ++len) {
      double total = 0.0;
      for (const auto& word : admissible_words(base, len)) {
        const double c = m.cylinder(word);
        double children = 0.0;
        for (int s = 0; s < base.size(); ++s) {
          Word longer = word;
          longer.push_back(s);
          children += m.cylinder(longer);
        }
        CHECK(children == Approx(c).epsilon(1e-13));
        total += c;
      }
      CHECK(total == Approx(1.0).epsilon(1e-13));
    }
  }
  // Long words go through the log-space path.
  Word long_word(40, 0);
  CHECK(mu.cylinder(long_word) ==
        Approx(std::pow(2.0 / 3, 40)).epsilon(1e-12));
}

TEST_CASE("Birkhoff sums") {
  const auto f = fixtures::log_p1(1.0 / 3);
  CHECK(birkhoff_sum(f, w("1122"), 3) ==
        Approx(std::log(2.0 / 3 * 1.0 / 3 * 1.0 / 3)).epsilon(1e-14));
  CHECK_THROWS_AS(birkhoff_sum(f, w("112"), 3), ValidationError);
  const auto f1 = Potential(fixtures::full2(), 1, {1.0, 10.0});
  CHECK(birkhoff_sum(f1, w("1212"), 4) == 22.0);
}

TEST_CASE("normalized potentials") {
  const auto fh = normalize_potential(fixtures::log_p1(1.0 / 3));
  CHECK(fh.edge(0, 0) == Approx(std::log(2.0 / 3)).epsilon(1e-13));
  CHECK(fh.edge(0, 1) == Approx(std::log(2.0 / 3)).epsilon(1e-13));
  CHECK(fh.edge(1, 0) == Approx(std::log(1.0 / 3)).epsilon(1e-13));
  CHECK(fh.edge(1, 1) == Approx(std::log(1.0 / 3)).epsilon(1e-13));

  // Columns of exp(f-hat) sum to lambda, and f-hat keeps the pressure.
  for (const auto& base : fixtures::test_bases())
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto f = fixtures::random_potential(base, seed, 2, 2.0);
      const auto g = normalize_potential(f);
      const double lambda = std::exp(fixtures::pressure_oracle(f));
      const Eigen::MatrixXd a = edge_matrix(g).values();
      for (int j = 0; j < base.size(); ++j)
        CHECK(a.col(j).sum() == Approx(lambda).epsilon(1e-12));
      CHECK(pressure(g) == Approx(pressure(f)).epsilon(1e-12));
    }
}

TEST_CASE("Jacobians") {
  const auto f = fixtures::log_p1(1.0 / 3);
  CHECK(jacobian(f, w("12"), JacobianKind::kGibbs) ==
        Approx(2.0 / 3).epsilon(1e-13));
  CHECK(jacobian(f, w("12"), JacobianKind::kEigenMeasure) ==
        Approx(1.0 / 3).epsilon(1e-13));
  CHECK_THROWS_AS(jacobian(f, w("1"), JacobianKind::kGibbs), ValidationError);

  for (const auto& base : fixtures::test_bases()) {
    const auto g = fixtures::random_potential(base, 12);
    const auto mu = gibbs_markov(g);
    for (int len = 2; len <= 6; ++len)
      for (const auto& word : admissible_words(base, len)) {
        const std::span<const int> tail(word.begin() + 1, word.end());
        CHECK(mu.cylinder(word) / mu.cylinder(tail) ==
              Approx(jacobian(g, word, JacobianKind::kGibbs)).epsilon(1e-10));
        CHECK(eigen_measure_cylinder(g, word) / eigen_measure_cylinder(g, tail) ==
              Approx(jacobian(g, word, JacobianKind::kEigenMeasure))
                  .epsilon(1e-10));
      }
  }
}

TEST_CASE("eigen measure is a probability measure") {
  for (const auto& base : fixtures::test_bases()) {
    const auto g = fixtures::random_potential(base, 2);
    for (int len = 1; len <= 4; ++len) {
      double total = 0.0;
      for (const auto& word : admissible_words(base, len))
        total += eigen_measure_cylinder(g, word);
      CHECK(total == Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("Gibbs constant audit") {
  const auto a = gibbs_constant_audit(fixtures::log_p1(1.0 / 3));
  CHECK(a.constant == Approx(2.0).epsilon(1e-12));
  CHECK(a.observed_min == Approx(0.5).epsilon(1e-12));
  CHECK(a.observed_max == Approx(2.0).epsilon(1e-12));
  CHECK(a.within_bounds);

  const auto c = gibbs_constant_audit(Potential::constant(fixtures::full2(), 0.4));
  CHECK(c.constant == Approx(1.0).epsilon(1e-12));
  CHECK(c.observed_min == Approx(1.0).epsilon(1e-12));

  for (const auto& f : n2_potentials()) {
    const auto r = gibbs_constant_audit(f, 12);
    CHECK(r.within_bounds);
    CHECK(r.observed_min >= 1.0 / r.constant - 1e-12);
    CHECK(r.observed_max <= r.constant + 1e-12);
    CHECK(std::abs(r.observed_min - r.theoretical_min) <= 1e-10);
    CHECK(std::abs(r.observed_max - r.theoretical_max) <= 1e-10);
  }

  const auto big = fixtures::random_potential(TransitionMatrix::full_shift(4), 1);
  CHECK_THROWS_AS(gibbs_constant_audit(big, 40), ResourceError);
}

TEST_CASE("entropy rates") {
  CHECK(entropy_rate(gibbs_markov(fixtures::log_p1(1.0 / 3))) ==
        Approx(std::log(3.0) - 2.0 / 3 * std::log(2.0)).epsilon(1e-13));
  CHECK(entropy_rate(gibbs_markov(Potential::constant(fixtures::full2(), 0.0))) ==
        Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("adding a constant shifts the pressure and the normalized potential") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto base = fixtures::test_bases()[seed % 5];
    const auto f = fixtures::random_potential(base, seed);
    const double c = -3.0 + 0.3 * static_cast<double>(seed);
    const auto g = f.shifted(c);
    CHECK(pressure(f) - pressure(g) == Approx(-c).epsilon(1e-10));
    const auto fh = normalize_potential(f), gh = normalize_potential(g);
    for (int i = 0; i < base.size(); ++i)
      for (int j = 0; j < base.size(); ++j)
        if (base.allowed(i, j))
          CHECK(std::abs(gh.edge(i, j) - fh.edge(i, j) - c) <= 1e-10);
  }
}

TEST_CASE("cohomologous potentials share pressure and Gibbs measure") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto base = fixtures::test_bases()[seed % 5];
    const auto f = fixtures::random_potential(base, seed);
    const auto h = fixtures::random_potential(base, seed + 99, 1);
    Eigen::MatrixXd weights = f.edge_weights();
    for (int i = 0; i < base.size(); ++i)
      for (int j = 0; j < base.size(); ++j)
        if (base.allowed(i, j))
          weights(i, j) += h.values()[i] - h.values()[j];
    const auto g = Potential::from_edge_weights(base, weights);
    CHECK(pressure(g) == Approx(pressure(f)).epsilon(1e-12));
    const auto mf = gibbs_markov(f), mg = gibbs_markov(g);
    CHECK((mf.transition().values() - mg.transition().values())
              .lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}
