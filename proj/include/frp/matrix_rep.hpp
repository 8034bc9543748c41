#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "frp/free_group.hpp"
#include "frp/random.hpp"

namespace frp {

enum class MatrixKind { orthogonal, permutation };

std::string_view to_string(MatrixKind kind);
/// Accepts "orthogonal" or "permutation".
MatrixKind parse_matrix_kind(std::string_view text);

/// Element of O(d).
class OrthogonalMatrix {
 public:
  /// Throws std::invalid_argument unless ||U^T U - I||_max <= tol.
  explicit OrthogonalMatrix(Eigen::MatrixXd m, double tol = 1e-10);

  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  Eigen::MatrixXd m_;
};

/// Element of the symmetric group P(d) acting by U e_j = e_{sigma(j)},
/// i.e. U_{ij} = 1 iff sigma(j) = i. Indices are 0-based.
class PermutationMatrix {
 public:
  /// Throws std::invalid_argument unless `sigma` is a bijection on [0, d).
  explicit PermutationMatrix(std::vector<std::uint32_t> sigma);
  static PermutationMatrix identity(std::size_t d);

  const std::vector<std::uint32_t>& sigma() const noexcept { return sigma_; }
  std::size_t dim() const noexcept { return sigma_.size(); }

  PermutationMatrix inverse() const;
  /// (*this) * other as matrices.
  PermutationMatrix compose(const PermutationMatrix& other) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd dense() const;

  bool operator==(const PermutationMatrix&) const = default;

 private:
  std::vector<std::uint32_t> sigma_;
};

/// Haar-distributed U in O(d): QR of a Gaussian matrix with R's diagonal
/// made positive. Throws std::invalid_argument for d == 0.
OrthogonalMatrix sample_haar_orthogonal(std::size_t d, Rng& rng);
/// Uniform element of P(d) by Fisher-Yates. Throws for d == 0.
PermutationMatrix sample_uniform_permutation(std::size_t d, Rng& rng);

/// The homomorphism F_n -> O(d) or P(d) fixed by a_i -> U_i.
class Representation {
 public:
  static Representation orthogonal(std::vector<OrthogonalMatrix> generators);
  static Representation permutation(std::vector<PermutationMatrix> generators);
  static Representation sample(MatrixKind kind, std::uint32_t n, std::size_t d, Rng& rng);

  MatrixKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return d_; }
  std::uint32_t generator_count() const noexcept { return static_cast<std::uint32_t>(dense_.size()); }
  /// U_i with 1-based i.
  const Eigen::MatrixXd& generator(std::uint32_t i) const;
  /// Only valid for the permutation kind.
  const PermutationMatrix& permutation_generator(std::uint32_t i) const;

  /// lambda(w) = U_{i_1} ... U_{i_l}; inverse letters use the transpose.
  /// Throws std::out_of_range when a letter exceeds generator_count().
  Eigen::MatrixXd apply_word(const ReducedWord& w) const;
  /// lambda(w) v without forming lambda(w).
  Eigen::VectorXd apply_word(const ReducedWord& w, const Eigen::VectorXd& v) const;
  /// lambda(w) as a permutation. Only valid for the permutation kind.
  PermutationMatrix apply_word_permutation(const ReducedWord& w) const;

 private:
  Representation(MatrixKind kind, std::size_t d) : kind_(kind), d_(d) {}
  void check_word(const ReducedWord& w) const;

  MatrixKind kind_;
  std::size_t d_;
  std::vector<Eigen::MatrixXd> dense_;
  std::vector<PermutationMatrix> perms_;
};

/// Normalized trace d^{-1} Tr[lambda(v)^T lambda(w)]; tends to 1 if v == w
/// and 0 otherwise.
double trace_correlation(const Representation& rep, const ReducedWord& v, const ReducedWord& w);
/// <lambda(v) xi, lambda(w) xi>.
double vector_correlation(const Representation& rep, const ReducedWord& v, const ReducedWord& w,
                          const Eigen::VectorXd& xi);

/// Composite s T_2 lambda(w) T_1 mapping a d_env observation to a d_in input.
/// T_1 zero-pads the observation to length d; T_2 keeps the first d_in rows
/// (and pads with zero rows when d_in > d).
class FrpOperator {
 public:
  FrpOperator(const Representation& rep, ReducedWord word, std::size_t d_env, std::size_t d_in, double scale);

  const ReducedWord& word() const noexcept { return word_; }
  double scale() const noexcept { return scale_; }
  std::size_t d_env() const noexcept { return d_env_; }
  std::size_t dim() const noexcept { return d_; }
  std::size_t d_in() const noexcept { return d_in_; }
  /// d_in x d_env.
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

  /// Throws std::invalid_argument on a length mismatch.
  Eigen::VectorXd project(const Eigen::VectorXd& observation) const;

 private:
  ReducedWord word_;
  double scale_;
  std::size_t d_env_;
  std::size_t d_;
  std::size_t d_in_;
  Eigen::MatrixXd matrix_;
};

inline FrpOperator frp_operator(const Representation& rep, const ReducedWord& w, std::size_t d_env,
                                std::size_t d_in, double scale) {
  return {rep, w, d_env, d_in, scale};
}
inline Eigen::VectorXd project_observation(const FrpOperator& op, const Eigen::VectorXd& xi) {
  return op.project(xi);
}

/// Writes manifest.txt (kind, d, n, generator file names) plus U<i>.csv.
void save_representation(const Representation& rep, const std::filesystem::path& dir);
Representation load_representation(const std::filesystem::path& dir);

}  // namespace frp
