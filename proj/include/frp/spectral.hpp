#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "frp/free_group.hpp"
#include "frp/matrix_rep.hpp"

namespace frp::spectral {

/// `count` log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Sum of lambda(w) over the family, evaluated word by word.
/// Throws std::invalid_argument when rep and family disagree on n.
Eigen::MatrixXd word_sum_matrix(const Representation& rep, const WordFamily& family);
/// (U_1 + ... + U_n)^ell, which equals word_sum_matrix over W_n^ell.
Eigen::MatrixXd generator_sum_power(const Representation& rep, std::uint32_t ell);

enum class SpectrumKind { singular, eigen };

struct SpectrumResult {
  std::vector<double> values;  // pooled over trials, sorted descending
  SpectrumKind kind = SpectrumKind::singular;
  std::size_t trials = 0;
  std::size_t per_trial = 0;
  std::vector<double> trial_max;  // largest value of each trial, in trial order
};

/// Concatenates per-trial values (recording each trial's maximum) and sorts
/// the pool descending.
SpectrumResult pool_spectrum(std::vector<std::vector<double>> per_trial, SpectrumKind kind);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;

  double bin_width() const { return counts.empty() ? 0.0 : (hi - lo) / static_cast<double>(counts.size()); }
};

/// Equal-width bins spanning [min, max] of the values.
Histogram make_histogram(const std::vector<double>& values, std::size_t bins = 50);

struct EsdConfig {
  std::size_t d = 64;
  std::uint64_t n_words = 256;
  std::uint32_t ell = 1;
  std::size_t trials = 128;
  MatrixKind kind = MatrixKind::orthogonal;
  std::uint64_t root_seed = 0;
  unsigned threads = 1;
};

/// Pooled singular values of n_w^{-1/2} sum_w lambda(w) (the ESD
/// normalisation; the kernel below uses n_w^{-1}). Trial t samples its
/// representation from derive_seed(derive_seed(root, ell), t).
SpectrumResult esd(const EsdConfig& cfg);

/// K = (S X)^T (S X) / n_w for the p columns of X, S = word_sum_matrix.
Eigen::MatrixXd empirical_kernel(const Eigen::MatrixXd& x, const Representation& rep, const WordFamily& family);
/// Same kernel from a precomputed word sum.
Eigen::MatrixXd kernel_from_word_sum(const Eigen::MatrixXd& x, const Eigen::MatrixXd& word_sum, double n_words);

/// Tr[K (K + gamma I)^{-1}] via the eigenvalues of symmetric K.
/// Throws std::invalid_argument for gamma <= 0.
double effective_dimension(const Eigen::MatrixXd& k, double gamma);
/// sum_i l_i / (l_i + gamma) over precomputed eigenvalues, one per gamma.
std::vector<double> effective_dimension_curve(const Eigen::VectorXd& eigenvalues, const std::vector<double>& gammas);

/// S-transform of MP(c): 1 / (z + c). Throws std::domain_error at the pole.
double mp_s_transform(double z, double c);
/// chi(z) = z/(z+1) ((z/n + 1)/(z + 1))^ell S_MP(z).
double chi(double z, std::uint32_t ell, double n, double c);

/// F(y) = -gamma y (1 - y/n)^ell + (1 - y)^{ell+1} (c - y), whose root in
/// (0,1) is -psi(-1/gamma).
double newton_target(double y, double gamma, std::uint32_t ell, double n, double c);
double newton_target_derivative(double y, double gamma, std::uint32_t ell, double n, double c);

struct TheoryResult {
  double value = 0.0;  // y* = -psi(-1/gamma)
  double residual = 0.0;
  std::size_t iterations = 0;
  std::size_t bisection_steps = 0;
};

/// Newton from y0 = 0.5 with analytic derivative; a step leaving the current
/// sign bracket is replaced by bisection. Throws std::domain_error when F
/// has no sign change on (0,1) and std::runtime_error on hitting max_iter.
TheoryResult solve_theoretical_eff_dim(double gamma, std::uint32_t ell, std::uint64_t n_words, double c,
                                       double tolerance = 1e-7, std::size_t max_iter = 1000);
inline double theoretical_eff_dim(double gamma, std::uint32_t ell, std::uint64_t n_words, double c) {
  return solve_theoretical_eff_dim(gamma, ell, n_words, c).value;
}

struct KernelConfig {
  std::size_t d = 64;
  std::size_t p = 64;
  std::uint64_t n_words = 256;
  std::vector<std::uint32_t> ells{1, 2, 4, 8};
  std::size_t trials = 128;
  std::vector<double> gammas = log_grid(1e-4, 1e-1, 20);
  std::uint64_t root_seed = 0;
  unsigned threads = 1;

  double ratio() const { return static_cast<double>(p) / static_cast<double>(d); }
};

struct EffDimRow {
  double gamma;
  std::uint32_t ell;
  double empirical_mean;
  double empirical_stderr;
  double theory;
};

/// Rows ordered by ell then gamma. Trial t of ell draws the representation
/// and X ~ N(0, 1/d) from derive_seed(derive_seed(root, ell), t).
std::vector<EffDimRow> effdim_experiment(const KernelConfig& cfg);

}  // namespace frp::spectral
