#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "frp/free_group.hpp"
#include "frp/matrix_rep.hpp"

namespace frp::orbital {

/// G[i,j] = <lambda(w_i) xi0, lambda(w_j) xi0>. Throws std::invalid_argument
/// unless |xi0| = 1 within 1e-12.
Eigen::MatrixXd orbit_gram(const Representation& rep, const std::vector<ReducedWord>& words,
                           const Eigen::VectorXd& xi0);

/// First standard basis vector of R^d.
Eigen::VectorXd default_base_point(std::size_t d);

/// Mean of the off-diagonal Gram entries over independent representations.
struct GramConcentration {
  double mean_off_diagonal = 0.0;
  double max_abs_diagonal_error = 0.0;
};

GramConcentration gram_concentration(std::size_t d, const std::vector<ReducedWord>& words, std::size_t trials,
                                     std::uint64_t root_seed, unsigned threads = 1);

enum class PairStatistic {
  gram_entry,        // <lambda(g) xi0, lambda(h) xi0>
  normalized_trace,  // d^{-1} Tr[lambda(g)^T lambda(h)]
};

struct VarianceConfig {
  std::vector<std::size_t> dims{32, 64, 128, 256};
  std::size_t trials = 200;
  ReducedWord g = {gen(1)};
  ReducedWord h = {gen(2)};
  PairStatistic statistic = PairStatistic::gram_entry;
  std::uint64_t root_seed = 0;
  unsigned threads = 1;
};

struct VariancePoint {
  std::size_t d;
  double mean;
  double variance;
};

/// Sample variance of the pair statistic per dimension. Trial t at dimension
/// d uses derive_seed(derive_seed(root, d), t). Throws for trials < 200.
std::vector<VariancePoint> gram_variance_scaling(const VarianceConfig& cfg);

struct IndependenceResult {
  double sigma_min = 0.0;
  bool dependent = false;
};

inline constexpr double kDependenceThreshold = 1e-8;

/// Smallest singular value of the d x 4 matrix of orbit points.
IndependenceResult orbit_independence_test(const Representation& rep, const std::array<ReducedWord, 4>& words,
                                           const Eigen::VectorXd& xi0);

/// All reduced words over n generators (with inverses) of length <= max_len,
/// in shortlex order.
std::vector<ReducedWord> ball(std::uint32_t n, std::size_t max_len);

struct IndependenceSweep {
  std::size_t trials = 0;
  std::size_t dependent = 0;
  double smallest_sigma = 0.0;
};

/// Each trial samples a fresh representation and four distinct words from the
/// radius-max_len ball of F_n.
IndependenceSweep independence_sweep(std::size_t d, std::uint32_t n, std::size_t max_len, std::size_t trials,
                                     std::uint64_t root_seed, unsigned threads = 1);

/// One geodesic of the Poincare disk drawing: a circle orthogonal to the unit
/// circle, clipped between two boundary points.
struct Arc {
  std::size_t level;
  std::size_t index;
  double cx, cy, r;
  double x1, y1, x2, y2;
};

/// Circle orthogonal to the unit circle through boundary points p and q
/// (centre (p+q)/(1+p.q), the intersection of the tangents at p and q).
Arc orthogonal_arc(double x1, double y1, double x2, double y2);

/// Levels 1..depth with m = 3^{level-1}, theta = pi/m, delta = pi/(3m) and
/// one arc per n in [0, 2m) between angles theta n - delta and theta n + delta.
std::vector<Arc> cayley_disk_arcs(std::size_t depth);

}  // namespace frp::orbital
