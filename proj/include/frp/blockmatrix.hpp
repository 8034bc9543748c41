#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "frp/free_group.hpp"
#include "frp/matrix_rep.hpp"
#include "frp/random.hpp"
#include "frp/spectral.hpp"

namespace frp::block {

/// Square matrix of words with side 2^k, stored row-major.
class SymbolMatrix {
 public:
  SymbolMatrix(std::uint32_t k, std::vector<ReducedWord> entries);

  std::uint32_t k() const noexcept { return k_; }
  std::size_t side() const noexcept { return std::size_t{1} << k_; }
  const ReducedWord& at(std::size_t r, std::size_t c) const { return entries_[r * side() + c]; }
  const std::vector<ReducedWord>& entries() const noexcept { return entries_; }

  bool operator==(const SymbolMatrix&) const = default;

 private:
  std::uint32_t k_;
  std::vector<ReducedWord> entries_;
};

/// W_{(i_1..i_k),(j_1..j_k)} = w_{i_1..i_k j_1..j_k}: the lexicographic
/// index of each word, read as 2k bits, gives k row bits then k column bits.
/// Requires |family| == 4^k and n a power of two; throws std::invalid_argument.
SymbolMatrix build_word_block(const WordFamily& family, std::uint32_t k);

/// A[x] = W[y] with y_i = x_{perm[i]} over the 2k binary index positions
/// (0-based, row bits first). perm must be a bijection on [0, 2k).
SymbolMatrix rearrange_indices(const SymbolMatrix& w, std::span<const int> perm);

/// The (2,7)(4,5) position swap on k = 4 block matrices:
/// W_{(i1,i2,i3,i4),(j1,j2,j3,j4)} -> W_{(i1,j3,i3,j1),(i4,j2,i2,j4)}.
/// Throws std::invalid_argument unless k == 4.
SymbolMatrix partial_transpose_2745(const SymbolMatrix& w);

/// Block (r, c) of the result is lambda(S[r, c]).
Eigen::MatrixXd block_apply(const Representation& rep, const SymbolMatrix& s);

/// Uniform permutation of all entries.
SymbolMatrix shuffle_entries(const SymbolMatrix& w, Rng& rng);

/// Half-word vector v with W[r,c] = v[r] v[c] for every cell, if one exists.
/// Only even ell can split; returns nullopt otherwise.
std::optional<std::vector<ReducedWord>> rank_one_check(const WordFamily& family, std::uint32_t k);

struct BlockSpectrumConfig {
  std::size_t d = 64;
  std::uint32_t generators = 256;
  MatrixKind kind = MatrixKind::orthogonal;
  std::size_t trials = 32;
  bool shuffle_each_trial = false;  // entry-shuffled baseline
  std::uint64_t root_seed = 0;
  unsigned threads = 1;
};

/// Pooled eigenvalues of K = n_w^{-1/2} lambda(A) lambda(A)^T, n_w = side^2.
/// Trial t uses the stream derive_seed(root, t) for its representation and,
/// when requested, the entry shuffle.
spectral::SpectrumResult block_kernel_spectrum(const SymbolMatrix& a, const BlockSpectrumConfig& cfg);

}  // namespace frp::block
