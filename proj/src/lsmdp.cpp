#include "frp/lsmdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "frp/parallel.hpp"

namespace frp::lsmdp {

std::string_view to_string(Topology t) { return t == Topology::lattice ? "lattice" : "tree"; }

Topology parse_topology(std::string_view text) {
  if (text == "lattice") return Topology::lattice;
  if (text == "tree") return Topology::tree;
  throw std::invalid_argument("unknown topology: " + std::string(text));
}

std::size_t Lsmdp::edge_count() const { return static_cast<std::size_t>(adjacency.sum() / 2); }

Lsmdp from_adjacency(const Eigen::MatrixXi& adjacency, double gamma, double alpha) {
  if (adjacency.rows() != adjacency.cols() || adjacency.rows() == 0) {
    throw std::invalid_argument("adjacency must be square and non-empty");
  }
  if (adjacency != adjacency.transpose()) throw std::invalid_argument("adjacency must be symmetric");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const auto n = adjacency.rows();
  Lsmdp m;
  m.adjacency = adjacency;
  m.passive = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    if (adjacency(s, s) != 0) throw std::invalid_argument("self loops are not allowed");
    const int degree = adjacency.row(s).sum();
    if (degree == 0) throw std::invalid_argument("state " + std::to_string(s) + " has no neighbours");
    m.passive.row(s) = adjacency.row(s).cast<double>() / static_cast<double>(degree);
  }
  m.cost = Eigen::VectorXd::Zero(n);
  m.gamma = gamma;
  m.alpha = alpha;
  return m;
}

Lsmdp build_state_space(Topology kind, double gamma, double alpha) {
  if (kind == Topology::lattice) {
    constexpr int side = 4;
    Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(side * side, side * side);
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c) {
        const int s = r * side + c;
        if (c + 1 < side) adj(s, s + 1) = adj(s + 1, s) = 1;
        if (r + 1 < side) adj(s, s + side) = adj(s + side, s) = 1;
      }
    }
    auto m = from_adjacency(adj, gamma, alpha);
    m.zero_cost_state = 0;
    return m;
  }
  constexpr int nodes = 15;
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(nodes, nodes);
  for (int s = 1; s < nodes; ++s) {
    const int parent = (s - 1) / 2;
    adj(s, parent) = adj(parent, s) = 1;
  }
  auto m = from_adjacency(adj, gamma, alpha);
  m.zero_cost_state = 7;
  return m;
}

Eigen::VectorXd sample_costs(const Lsmdp& m, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd c(static_cast<Eigen::Index>(m.size()));
  for (Eigen::Index s = 0; s < c.size(); ++s) c[s] = unif(rng);
  c[static_cast<Eigen::Index>(m.zero_cost_state)] = 0.0;
  return c;
}

Desirability solve_desirability(const Lsmdp& m, std::size_t max_iterations, double tolerance) {
  const auto n = static_cast<Eigen::Index>(m.size());
  if (m.passive.rows() != n || m.passive.cols() != n) throw std::invalid_argument("passive/cost size mismatch");
  const Eigen::VectorXd q = (-(m.gamma / m.alpha) * m.cost).array().exp();
  const Eigen::MatrixXd M = q.asDiagonal() * m.passive;

  Desirability out;
  Eigen::VectorXd z = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Eigen::VectorXd next(n);
  bool converged = false;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    next.noalias() = M * z;
    next += z;
    next /= next.norm();
    const double step = (next - z).norm();
    z.swap(next);
    out.iterations = it;
    if (step <= tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw std::runtime_error("power iteration did not converge in " + std::to_string(max_iterations) +
                             " iterations");
  }
  const Eigen::VectorXd mz = M * z;
  out.eigenvalue = z.dot(mz);
  out.residual = (mz - out.eigenvalue * z).norm();
  if ((z.array() <= 0.0).any()) throw std::runtime_error("Perron vector is not strictly positive");
  out.z = std::move(z);
  return out;
}

Eigen::MatrixXd optimal_policy(const Eigen::MatrixXd& passive, const Eigen::VectorXd& z) {
  if (passive.cols() != z.size() || passive.rows() != z.size()) throw std::invalid_argument("policy size mismatch");
  Eigen::MatrixXd pi = passive * z.asDiagonal();
  for (Eigen::Index s = 0; s < pi.rows(); ++s) {
    const double denom = pi.row(s).sum();
    if (!(denom > 0.0)) throw std::logic_error("zero normaliser in policy row " + std::to_string(s));
    pi.row(s) /= denom;
  }
  return pi;
}

MetaSolution meta_aggregate(const Lsmdp& m, const Eigen::VectorXd& z_star, const Representation& rep,
                            const WordFamily& family) {
  if (rep.kind() != MatrixKind::permutation) throw std::invalid_argument("meta aggregation needs permutations");
  if (rep.dim() != m.size() || static_cast<std::size_t>(z_star.size()) != m.size()) {
    throw std::invalid_argument("representation dimension differs from the state count");
  }
  if (family.n() > rep.generator_count()) throw std::invalid_argument("family uses more generators than rep");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(z_star.size());
  for (const auto& w : family) acc += rep.apply_word_permutation(w).apply(z_star);
  acc /= static_cast<double>(family.size());
  MetaSolution out;
  out.policy = optimal_policy(m.passive, acc);
  out.z = std::move(acc);
  return out;
}

DivergenceMetrics policy_divergence(const Eigen::MatrixXd& pi_star, const Eigen::MatrixXd& pi_ell,
                                    const Eigen::VectorXd& z_star, const Eigen::VectorXd& z_ell) {
  if (pi_star.rows() != pi_ell.rows() || pi_star.cols() != pi_ell.cols() || z_star.size() != z_ell.size() ||
      pi_star.rows() != z_star.size()) {
    throw std::invalid_argument("divergence inputs have mismatched shapes");
  }
  DivergenceMetrics out;
  double kl_sum = 0.0;
  for (Eigen::Index s = 0; s < pi_star.rows(); ++s) {
    for (Eigen::Index t = 0; t < pi_star.cols(); ++t) {
      const double p = pi_star(s, t);
      if (p <= 0.0) continue;
      const double q = pi_ell(s, t);
      if (q <= 0.0) {
        out.support_violation = true;
        continue;
      }
      kl_sum += p * std::log(p / q);
    }
  }
  out.kl = out.support_violation ? std::numeric_limits<double>::infinity()
                                 : kl_sum / static_cast<double>(pi_star.rows());
  out.l1_policy = (pi_ell - pi_star).cwiseAbs().sum();
  const Eigen::VectorXd diff = z_ell / z_ell.norm() - z_star / z_star.norm();
  out.l2_z = diff.norm();
  out.l1_z = diff.cwiseAbs().sum();
  return out;
}

Lsmdp permute(const Lsmdp& m, const PermutationMatrix& sigma) {
  if (sigma.dim() != m.size()) throw std::invalid_argument("permutation size mismatch");
  const Eigen::MatrixXd p = sigma.dense();
  Lsmdp out = m;
  out.adjacency = (p * m.adjacency.cast<double>() * p.transpose()).cast<int>();
  out.passive = p * m.passive * p.transpose();
  out.cost = sigma.apply(m.cost);
  out.zero_cost_state = sigma.sigma()[m.zero_cost_state];
  return out;
}

std::vector<MetaRow> run_meta_experiment(const MetaConfig& cfg) {
  std::vector<std::uint32_t> generators;
  for (auto ell : cfg.ells) generators.push_back(generators_for(cfg.n_words, ell));
  const Lsmdp base = build_state_space(cfg.topology, cfg.gamma, cfg.alpha);

  std::vector<MetaRow> rows(static_cast<std::size_t>(cfg.seeds) * cfg.ells.size());
  parallel_for(cfg.seeds, cfg.threads, [&](std::size_t seed) {
    Rng rng = make_rng(cfg.root_seed, seed);
    Lsmdp m = base;
    m.cost = sample_costs(m, rng);
    const auto sol = solve_desirability(m);
    const auto pi_star = optimal_policy(m.passive, sol.z);
    for (std::size_t k = 0; k < cfg.ells.size(); ++k) {
      const WordFamily family(generators[k], cfg.ells[k]);
      Rng rep_rng = make_rng(derive_seed(cfg.root_seed, seed), cfg.ells[k]);
      const auto rep = Representation::sample(MatrixKind::permutation, generators[k], m.size(), rep_rng);
      const auto meta = meta_aggregate(m, sol.z, rep, family);
      rows[seed * cfg.ells.size() + k] =
          MetaRow{cfg.topology, cfg.ells[k], static_cast<std::uint32_t>(seed),
                  policy_divergence(pi_star, meta.policy, sol.z, meta.z), sol.residual};
    }
  });
  return rows;
}

}  // namespace frp::lsmdp
