#include "frp/orbital.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/SVD>

#include "frp/parallel.hpp"
#include "frp/random.hpp"
#include "frp/stats.hpp"

namespace frp::orbital {

Eigen::VectorXd default_base_point(std::size_t d) {
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  xi[0] = 1.0;
  return xi;
}

Eigen::MatrixXd orbit_gram(const Representation& rep, const std::vector<ReducedWord>& words,
                           const Eigen::VectorXd& xi0) {
  if (std::abs(xi0.norm() - 1.0) > 1e-12) throw std::invalid_argument("base point must be a unit vector");
  Eigen::MatrixXd points(xi0.size(), static_cast<Eigen::Index>(words.size()));
  for (std::size_t i = 0; i < words.size(); ++i) points.col(static_cast<Eigen::Index>(i)) = rep.apply_word(words[i], xi0);
  return points.transpose() * points;
}

GramConcentration gram_concentration(std::size_t d, const std::vector<ReducedWord>& words, std::size_t trials,
                                     std::uint64_t root_seed, unsigned threads) {
  std::uint32_t n = 1;
  for (const auto& w : words) n = std::max(n, w.max_generator());
  const Eigen::VectorXd xi0 = default_base_point(d);
  std::vector<double> off(trials, 0.0);
  std::vector<double> diag(trials, 0.0);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng = make_rng(root_seed, t);
    const auto rep = Representation::sample(MatrixKind::orthogonal, n, d, rng);
    const Eigen::MatrixXd g = orbit_gram(rep, words, xi0);
    const auto k = g.rows();
    off[t] = k > 1 ? (g.sum() - g.trace()) / static_cast<double>(k * (k - 1)) : 0.0;
    diag[t] = (g.diagonal().array() - 1.0).abs().maxCoeff();
  });
  return {stats::mean(off), *std::max_element(diag.begin(), diag.end())};
}

std::vector<VariancePoint> gram_variance_scaling(const VarianceConfig& cfg) {
  if (cfg.trials < 200) throw std::invalid_argument("variance scaling needs at least 200 trials");
  const std::uint32_t n = std::max({1u, cfg.g.max_generator(), cfg.h.max_generator()});
  std::vector<VariancePoint> out;
  for (std::size_t d : cfg.dims) {
    const Eigen::VectorXd xi0 = default_base_point(d);
    std::vector<double> values(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
      Rng rng = make_rng(derive_seed(cfg.root_seed, d), t);
      const auto rep = Representation::sample(MatrixKind::orthogonal, n, d, rng);
      values[t] = cfg.statistic == PairStatistic::gram_entry ? vector_correlation(rep, cfg.g, cfg.h, xi0)
                                                             : trace_correlation(rep, cfg.g, cfg.h);
    });
    out.push_back({d, stats::mean(values), stats::variance(values)});
  }
  return out;
}

IndependenceResult orbit_independence_test(const Representation& rep, const std::array<ReducedWord, 4>& words,
                                           const Eigen::VectorXd& xi0) {
  Eigen::MatrixXd points(xi0.size(), 4);
  for (Eigen::Index i = 0; i < 4; ++i) points.col(i) = rep.apply_word(words[static_cast<std::size_t>(i)], xi0);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(points).singularValues();
  IndependenceResult out;
  out.sigma_min = sv[sv.size() - 1];
  out.dependent = out.sigma_min < kDependenceThreshold;
  return out;
}

std::vector<ReducedWord> ball(std::uint32_t n, std::size_t max_len) {
  std::vector<ReducedWord> out{ReducedWord::identity()};
  std::size_t frontier_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t frontier_end = out.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (std::uint32_t g = 1; g <= n; ++g) {
        for (bool inverted : {false, true}) {
          const Letter l{g, inverted};
          auto letters = out[i].letters();
          if (!letters.empty() && letters.back().cancels(l)) continue;
          std::vector<Letter> next(letters.begin(), letters.end());
          next.push_back(l);
          out.emplace_back(next);
        }
      }
    }
    frontier_begin = frontier_end;
  }
  return out;
}

IndependenceSweep independence_sweep(std::size_t d, std::uint32_t n, std::size_t max_len, std::size_t trials,
                                     std::uint64_t root_seed, unsigned threads) {
  const auto words = ball(n, max_len);
  if (words.size() < 4) throw std::invalid_argument("ball has fewer than four words");
  const Eigen::VectorXd xi0 = default_base_point(d);
  std::vector<IndependenceResult> results(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng = make_rng(root_seed, t);
    const auto rep = Representation::sample(MatrixKind::orthogonal, n, d, rng);
    std::array<std::size_t, 4> picks{};
    for (std::size_t k = 0; k < 4; ++k) {
      std::size_t idx = 0;
      do {
        idx = std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng);
      } while (std::find(picks.begin(), picks.begin() + static_cast<std::ptrdiff_t>(k), idx) !=
               picks.begin() + static_cast<std::ptrdiff_t>(k));
      picks[k] = idx;
    }
    results[t] = orbit_independence_test(rep, {words[picks[0]], words[picks[1]], words[picks[2]], words[picks[3]]}, xi0);
  });
  IndependenceSweep out;
  out.trials = trials;
  out.smallest_sigma = 1.0;
  for (const auto& r : results) {
    out.dependent += r.dependent ? 1 : 0;
    out.smallest_sigma = std::min(out.smallest_sigma, r.sigma_min);
  }
  return out;
}

Arc orthogonal_arc(double x1, double y1, double x2, double y2) {
  const double dot = x1 * x2 + y1 * y2;
  if (1.0 + dot <= 1e-12) throw std::invalid_argument("antipodal endpoints span a diameter, not a circle");
  const double cx = (x1 + x2) / (1.0 + dot);
  const double cy = (y1 + y2) / (1.0 + dot);
  return Arc{0, 0, cx, cy, std::hypot(cx - x1, cy - y1), x1, y1, x2, y2};
}

std::vector<Arc> cayley_disk_arcs(std::size_t depth) {
  if (depth == 0) throw std::invalid_argument("depth must be at least 1");
  std::vector<Arc> arcs;
  std::size_t m = 1;
  for (std::size_t level = 1; level <= depth; ++level, m *= 3) {
    const double theta = std::numbers::pi / static_cast<double>(m);
    const double delta = std::numbers::pi / (3.0 * static_cast<double>(m));
    for (std::size_t k = 0; k < 2 * m; ++k) {
      const double a = theta * static_cast<double>(k);
      Arc arc = orthogonal_arc(std::cos(a - delta), std::sin(a - delta), std::cos(a + delta), std::sin(a + delta));
      arc.level = level;
      arc.index = k;
      arcs.push_back(arc);
    }
  }
  return arcs;
}

}  // namespace frp::orbital
