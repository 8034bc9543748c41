#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "frp/random.hpp"
#include "frp/spectral.hpp"
#include "frp/stats.hpp"

using namespace frp;
using namespace frp::spectral;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// Plain bisection on F over (0, 1), independent of the library solver.
double bisect_root(double gamma, std::uint32_t ell, double n, double c) {
  auto f = [&](double y) {
    return -gamma * y * std::pow(1.0 - y / n, ell) + std::pow(1.0 - y, ell + 1) * (c - y);
  };
  double lo = 0.0;
  double hi = 1.0;
  const bool lo_positive = f(lo) > 0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("log grid") {
  const auto g = log_grid(1e-4, 1e-1, 20);
  REQUIRE(g.size() == 20);
  CHECK(g.front() == doctest::Approx(1e-4));
  CHECK(g.back() == doctest::Approx(1e-1));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(g[1] / g[0]));
}

TEST_CASE("word sums") {
  Rng rng(1);
  const auto rep = Representation::sample(MatrixKind::orthogonal, 2, 6, rng);
  const WordFamily single(1, 1);
  const auto rep1 = Representation::sample(MatrixKind::orthogonal, 1, 6, rng);
  CHECK(max_abs(word_sum_matrix(rep1, single) - rep1.generator(1)) == 0.0);

  const Eigen::MatrixXd& u1 = rep.generator(1);
  const Eigen::MatrixXd& u2 = rep.generator(2);
  const Eigen::MatrixXd expanded = u1 * u1 + u1 * u2 + u2 * u1 + u2 * u2;
  CHECK(max_abs(word_sum_matrix(rep, WordFamily(2, 2)) - expanded) <= 1e-12);
  CHECK(max_abs(generator_sum_power(rep, 2) - expanded) <= 1e-12);

  const auto rep4 = Representation::sample(MatrixKind::permutation, 4, 8, rng);
  CHECK(max_abs(word_sum_matrix(rep4, WordFamily(4, 4)) - generator_sum_power(rep4, 4)) <= 1e-9);
  CHECK_THROWS_AS(word_sum_matrix(rep, WordFamily(3, 1)), std::invalid_argument);
}

TEST_CASE("ESD of a single orthogonal word is flat") {
  EsdConfig cfg;
  cfg.d = 16;
  cfg.n_words = 1;
  cfg.ell = 1;
  cfg.trials = 3;
  const auto res = esd(cfg);
  REQUIRE(res.values.size() == 48);
  for (double v : res.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ESD pooling shape and determinism") {
  EsdConfig cfg;
  cfg.d = 16;
  cfg.n_words = 16;
  cfg.ell = 2;
  cfg.trials = 5;
  cfg.root_seed = 3;
  cfg.threads = 1;
  const auto a = esd(cfg);
  cfg.threads = 3;
  const auto b = esd(cfg);
  CHECK(a.values.size() == 80);
  CHECK(a.per_trial == 16);
  CHECK(a.trial_max.size() == 5);
  CHECK(a.values == b.values);
  CHECK(a.trial_max == b.trial_max);
  CHECK(std::is_sorted(a.values.rbegin(), a.values.rend()));
}

TEST_CASE("empirical kernel equals the brute-force double sum") {
  Rng rng(2);
  const std::size_t d = 5;
  const std::size_t p = 3;
  const auto rep = Representation::sample(MatrixKind::orthogonal, 2, d, rng);
  const WordFamily family(2, 2);
  REQUIRE(family.size() == 4);
  Eigen::MatrixXd x(d, p);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);

  Eigen::MatrixXd brute = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(p); ++i) {
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p); ++j) {
      double s = 0.0;
      for (const auto& w : family) {
        for (const auto& v : family) s += (rep.apply_word(w) * x.col(i)).dot(rep.apply_word(v) * x.col(j));
      }
      brute(i, j) = s / static_cast<double>(family.size());
    }
  }
  CHECK(max_abs(empirical_kernel(x, rep, family) - brute) <= 1e-9);
  CHECK(max_abs(kernel_from_word_sum(x, generator_sum_power(rep, 2), 4.0) - brute) <= 1e-9);
}

TEST_CASE("effective dimension") {
  CHECK(effective_dimension(Eigen::MatrixXd::Identity(8, 8), 1.0) == doctest::Approx(4.0));
  CHECK(effective_dimension(Eigen::MatrixXd::Zero(8, 8), 0.1) == 0.0);
  CHECK_THROWS_AS(effective_dimension(Eigen::MatrixXd::Identity(2, 2), 0.0), std::invalid_argument);

  // trace of K (K + gamma I)^{-1} by a linear solve
  Rng rng(3);
  Eigen::MatrixXd a(6, 6);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
  const Eigen::MatrixXd k = a * a.transpose();
  for (double gamma : {1e-3, 0.5, 7.0}) {
    const Eigen::MatrixXd shifted = k + gamma * Eigen::MatrixXd::Identity(6, 6);
    const double expected = shifted.fullPivLu().solve(k).trace();
    CHECK(effective_dimension(k, gamma) == doctest::Approx(expected).epsilon(1e-10));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  const auto curve = effective_dimension_curve(es.eigenvalues(), {0.5, 7.0});
  CHECK(curve[0] == doctest::Approx(effective_dimension(k, 0.5)));
  CHECK(curve[1] == doctest::Approx(effective_dimension(k, 7.0)));
}

TEST_CASE("S-transform of MP") {
  CHECK(mp_s_transform(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(mp_s_transform(-0.5, 1.0) == doctest::Approx(2.0));
  CHECK(mp_s_transform(1.0, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(mp_s_transform(-1.0, 1.0), std::domain_error);
}

TEST_CASE("Newton target derivative matches finite differences") {
  for (std::uint32_t ell : {1u, 2u, 4u, 8u}) {
    const double n = std::pow(256.0, 1.0 / ell);
    for (double y : {0.1, 0.4, 0.8}) {
      const double h = 1e-6;
      const double fd = (newton_target(y + h, 0.01, ell, n, 1.0) - newton_target(y - h, 0.01, ell, n, 1.0)) / (2 * h);
      CHECK(newton_target_derivative(y, 0.01, ell, n, 1.0) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("theoretical effective dimension") {
  const auto r = solve_theoretical_eff_dim(0.01, 1, 256, 1.0);
  CHECK(std::abs(r.value - bisect_root(0.01, 1, 256.0, 1.0)) <= 1e-6);
  CHECK(std::abs(r.residual) <= 1e-7);
  CHECK(r.iterations < 1000);

  CHECK(theoretical_eff_dim(1e6, 1, 256, 1.0) <= 1e-4);

  for (std::uint32_t ell : {1u, 2u, 4u, 8u}) {
    const double n = std::pow(256.0, 1.0 / ell);
    for (double gamma : log_grid(1e-4, 1e-1, 20)) {
      const auto t = solve_theoretical_eff_dim(gamma, ell, 256, 1.0);
      CHECK(std::abs(t.value - bisect_root(gamma, ell, n, 1.0)) <= 1e-6);
      CHECK(t.value > 0.0);
      CHECK(t.value < 1.0);
    }
  }
}

TEST_CASE("MP(1) CDF agrees with quadrature of its density") {
  // substitute x = 4 sin^2(t) to remove the endpoint singularity
  auto integrand = [](double t) {
    const double x = 4.0 * std::sin(t) * std::sin(t);
    return stats::mp1_density(x) * 8.0 * std::sin(t) * std::cos(t);
  };
  for (double x : {0.05, 0.5, 1.0, 2.0, 3.5, 4.0}) {
    const double upper = std::asin(std::sqrt(x) / 2.0);
    CHECK(stats::mp1_cdf(x) == doctest::Approx(simpson(integrand, 1e-12, upper, 2000)).epsilon(1e-8));
  }
  CHECK(stats::mp1_cdf(0.0) == 0.0);
  CHECK(stats::mp1_cdf(-1.0) == 0.0);
  CHECK(stats::mp1_cdf(5.0) == 1.0);
}

TEST_CASE("KS distances") {
  // quantiles of MP(1) by bisection on the closed-form CDF
  std::vector<double> sample;
  const int m = 2000;
  for (int i = 0; i < m; ++i) {
    const double u = (i + 0.5) / m;
    double lo = 0.0, hi = 4.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (stats::mp1_cdf(mid) < u ? lo : hi) = mid;
    }
    sample.push_back(0.5 * (lo + hi));
  }
  CHECK(stats::ks_distance(sample, stats::mp1_cdf) <= 1.0 / m + 1e-9);
  CHECK(stats::ks_distance(sample, sample) == 0.0);
  CHECK(stats::ks_distance({0.0, 1.0}, {2.0, 3.0}) == 1.0);
  CHECK(stats::ks_distance({1.0, 2.0, 3.0, 4.0}, {3.0, 4.0, 5.0, 6.0}) == doctest::Approx(0.5));
}

TEST_CASE("mean and variance") {
  CHECK(stats::mean({1.0, 2.0, 3.0}) == doctest::Approx(2.0));
  CHECK(stats::variance({1.0, 2.0, 3.0}) == doctest::Approx(1.0));
  CHECK(stats::variance({5.0}) == 0.0);
}

TEST_CASE("histogram") {
  const auto h = make_histogram({0.0, 0.1, 0.5, 0.9, 1.0}, 2);
  CHECK(h.lo == 0.0);
  CHECK(h.hi == 1.0);
  REQUIRE(h.counts.size() == 2);
  CHECK(h.counts[0] + h.counts[1] == 5);
  CHECK(h.counts[0] == 2);
}

TEST_CASE("effective dimension experiment is reproducible") {
  KernelConfig cfg;
  cfg.d = 8;
  cfg.p = 8;
  cfg.n_words = 16;
  cfg.ells = {1, 2};
  cfg.trials = 4;
  cfg.gammas = {1e-2, 1e-1};
  cfg.root_seed = 9;
  cfg.threads = 1;
  const auto a = effdim_experiment(cfg);
  cfg.threads = 2;
  const auto b = effdim_experiment(cfg);
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].empirical_mean == b[i].empirical_mean);
    CHECK(a[i].theory == b[i].theory);
    CHECK(a[i].empirical_mean > 0.0);
    CHECK(a[i].empirical_mean < 1.0);
  }
  CHECK(a[0].ell == 1);
  CHECK(a[0].gamma == 1e-2);
  CHECK(a[3].ell == 2);
}
