#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "frp/free_group.hpp"
#include "frp/matrix_rep.hpp"
#include "frp/random.hpp"

namespace frp::lsmdp {

enum class Topology { lattice, tree };

std::string_view to_string(Topology t);
Topology parse_topology(std::string_view text);

/// Discrete linearly-solvable MDP on an undirected state graph.
struct Lsmdp {
  Eigen::MatrixXi adjacency;  // symmetric 0/1, no self loops
  Eigen::MatrixXd passive;    // p(s'|s), row stochastic, supported on edges
  Eigen::VectorXd cost;       // c(s) >= 0
  double gamma = 0.95;
  double alpha = 1.0;
  std::size_t zero_cost_state = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(cost.size()); }
  std::size_t edge_count() const;
};

/// Uniform passive dynamics over the neighbours of each state.
Lsmdp from_adjacency(const Eigen::MatrixXi& adjacency, double gamma = 0.95, double alpha = 1.0);

/// 4x4 grid with 4-neighbour edges (zero-cost corner (0,0) = state 0) or the
/// complete binary tree with 15 nodes in heap order (zero-cost leaf = the
/// left-most deepest node, state 7).
Lsmdp build_state_space(Topology kind, double gamma = 0.95, double alpha = 1.0);

/// I.i.d. Unif[0,1] costs with the designated extremity forced to zero.
Eigen::VectorXd sample_costs(const Lsmdp& m, Rng& rng);

struct Desirability {
  Eigen::VectorXd z;        // positive, unit l2 norm
  double eigenvalue = 0.0;  // Perron root of diag(exp(-gamma/alpha c)) P
  double residual = 0.0;    // ||M z - rho z||_2
  std::size_t iterations = 0;
};

/// Perron eigenvector of M = diag(exp(-(gamma/alpha) c)) P by power iteration
/// on (M + I), which shares M's Perron vector but is aperiodic on bipartite
/// graphs. Throws std::runtime_error when the iteration cap is reached.
Desirability solve_desirability(const Lsmdp& m, std::size_t max_iterations = 100000, double tolerance = 1e-13);

/// pi(s'|s) = p(s'|s) z(s') / sum_s'' p(s''|s) z(s''). Throws
/// std::logic_error on a zero denominator.
Eigen::MatrixXd optimal_policy(const Eigen::MatrixXd& passive, const Eigen::VectorXd& z);

struct MetaSolution {
  Eigen::VectorXd z;
  Eigen::MatrixXd policy;
};

/// z^l = n_w^{-1} sum_w lambda(w) z*, with pi^l from the passive dynamics.
MetaSolution meta_aggregate(const Lsmdp& m, const Eigen::VectorXd& z_star, const Representation& rep,
                            const WordFamily& family);

struct DivergenceMetrics {
  double kl = 0.0;         // mean over states of KL(pi*(.|s) || pi^l(.|s))
  double l1_policy = 0.0;  // sum over all entries |pi^l - pi*|
  double l2_z = 0.0;       // || z^l/|z^l| - z*/|z*| ||_2
  double l1_z = 0.0;       // || z^l/|z^l| - z*/|z*| ||_1
  bool support_violation = false;  // pi^l vanishes where pi* does not; kl is +inf
};

DivergenceMetrics policy_divergence(const Eigen::MatrixXd& pi_star, const Eigen::MatrixXd& pi_ell,
                                    const Eigen::VectorXd& z_star, const Eigen::VectorXd& z_ell);

/// Relabels states by sigma: state j becomes sigma(j).
Lsmdp permute(const Lsmdp& m, const PermutationMatrix& sigma);

struct MetaRow {
  Topology topology;
  std::uint32_t ell;
  std::uint32_t seed;
  DivergenceMetrics metrics;
  double perron_residual;
};

struct MetaConfig {
  Topology topology = Topology::tree;
  std::uint64_t n_words = 256;
  std::vector<std::uint32_t> ells{1, 2, 4, 8};
  std::uint32_t seeds = 10;
  std::uint64_t root_seed = 0;
  double gamma = 0.95;
  double alpha = 1.0;
  unsigned threads = 1;
};

/// One row per (seed, ell). Seed s draws its costs from derive_seed(root, s);
/// the representation for each ell comes from
/// derive_seed(derive_seed(root, s), ell).
std::vector<MetaRow> run_meta_experiment(const MetaConfig& cfg);

}  // namespace frp::lsmdp
