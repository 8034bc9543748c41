#include "frp/blockmatrix.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "frp/parallel.hpp"

namespace frp::block {

SymbolMatrix::SymbolMatrix(std::uint32_t k, std::vector<ReducedWord> entries) : k_(k), entries_(std::move(entries)) {
  if (k_ > 15) throw std::invalid_argument("block side too large");
  if (entries_.size() != side() * side()) throw std::invalid_argument("entry count must be 4^k");
}

SymbolMatrix build_word_block(const WordFamily& family, std::uint32_t k) {
  if (k > 15 || family.size() != (std::size_t{1} << (2 * k))) {
    throw std::invalid_argument("word block needs n_w = 4^k, got n_w = " + std::to_string(family.size()));
  }
  if (!std::has_single_bit(family.n())) throw std::invalid_argument("word block needs n = 2^m generators");
  // Lexicographic position with n = 2^m splits into m bits per letter.
  return SymbolMatrix(k, family.words());
}

SymbolMatrix rearrange_indices(const SymbolMatrix& w, std::span<const int> perm) {
  const std::size_t bits = 2 * w.k();
  if (perm.size() != bits) throw std::invalid_argument("index permutation must cover 2k positions");
  std::vector<bool> seen(bits, false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= bits || seen[static_cast<std::size_t>(p)]) {
      throw std::invalid_argument("index permutation is not a bijection");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
  // Position i (0-based, most significant first) is bit (bits - 1 - i).
  auto bit_at = [bits](std::size_t flat, std::size_t pos) { return (flat >> (bits - 1 - pos)) & 1u; };
  const std::size_t count = w.entries().size();
  std::vector<ReducedWord> out(count);
  for (std::size_t x = 0; x < count; ++x) {
    std::size_t y = 0;
    for (std::size_t i = 0; i < bits; ++i) {
      y |= bit_at(x, static_cast<std::size_t>(perm[i])) << (bits - 1 - i);
    }
    out[x] = w.entries()[y];
  }
  return SymbolMatrix(w.k(), std::move(out));
}

SymbolMatrix partial_transpose_2745(const SymbolMatrix& w) {
  if (w.k() != 4) throw std::invalid_argument("partial transpose (2,7)(4,5) is defined for k = 4 only");
  static constexpr std::array<int, 8> swap_2745{0, 6, 2, 4, 3, 5, 1, 7};
  return rearrange_indices(w, swap_2745);
}

namespace {

/// Memoised lambda over prefixes, so a family of words sharing prefixes costs
/// one product per distinct prefix.
class WordCache {
 public:
  explicit WordCache(const Representation& rep) : rep_(rep) {}

  const Eigen::MatrixXd& get(const ReducedWord& w) {
    if (auto it = cache_.find(w); it != cache_.end()) return it->second;
    Eigen::MatrixXd value;
    if (w.length() <= 1) {
      value = rep_.apply_word(w);
    } else {
      auto letters = w.letters();
      const ReducedWord prefix(letters.first(letters.size() - 1));
      const Letter last = letters.back();
      const auto& u = rep_.generator(last.generator);
      const Eigen::MatrixXd& head = get(prefix);
      value = last.inverted ? Eigen::MatrixXd(head * u.transpose()) : Eigen::MatrixXd(head * u);
    }
    return cache_.emplace(w, std::move(value)).first->second;
  }

 private:
  const Representation& rep_;
  std::map<ReducedWord, Eigen::MatrixXd> cache_;
};

}  // namespace

Eigen::MatrixXd block_apply(const Representation& rep, const SymbolMatrix& s) {
  const auto d = static_cast<Eigen::Index>(rep.dim());
  const auto side = static_cast<Eigen::Index>(s.side());
  for (const auto& w : s.entries()) {
    if (w.max_generator() > rep.generator_count()) throw std::out_of_range("symbol uses an unknown generator");
  }
  WordCache cache(rep);
  Eigen::MatrixXd out(side * d, side * d);
  for (Eigen::Index r = 0; r < side; ++r)
    for (Eigen::Index c = 0; c < side; ++c)
      out.block(r * d, c * d, d, d) = cache.get(s.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
  return out;
}

SymbolMatrix shuffle_entries(const SymbolMatrix& w, Rng& rng) {
  std::vector<ReducedWord> entries = w.entries();
  for (std::size_t i = entries.size() - 1; i > 0; --i) {
    const auto j = std::uniform_int_distribution<std::size_t>(0, i)(rng);
    std::swap(entries[i], entries[j]);
  }
  return SymbolMatrix(w.k(), std::move(entries));
}

std::optional<std::vector<ReducedWord>> rank_one_check(const WordFamily& family, std::uint32_t k) {
  if (family.ell() % 2 != 0) return std::nullopt;
  const SymbolMatrix w = build_word_block(family, k);
  const WordFamily halves(family.n(), family.ell() / 2);
  if (halves.size() != w.side()) return std::nullopt;
  const auto& v = halves.words();
  for (std::size_t r = 0; r < w.side(); ++r)
    for (std::size_t c = 0; c < w.side(); ++c)
      if (w.at(r, c) != v[r] * v[c]) return std::nullopt;
  return v;
}

spectral::SpectrumResult block_kernel_spectrum(const SymbolMatrix& a, const BlockSpectrumConfig& cfg) {
  for (const auto& w : a.entries()) {
    if (w.max_generator() > cfg.generators) throw std::invalid_argument("symbol uses more generators than sampled");
  }
  const double norm = 1.0 / static_cast<double>(a.side());  // n_w^{-1/2} with n_w = side^2
  std::vector<std::vector<double>> per_trial(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    Rng rng = make_rng(cfg.root_seed, t);
    const auto rep = Representation::sample(cfg.kind, cfg.generators, cfg.d, rng);
    const SymbolMatrix symbols = cfg.shuffle_each_trial ? shuffle_entries(a, rng) : a;
    const Eigen::MatrixXd big = block_apply(rep, symbols);
    Eigen::MatrixXd k(big.rows(), big.rows());
    k.setZero();
    k.selfadjointView<Eigen::Lower>().rankUpdate(big, norm);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    per_trial[t].assign(ev.data(), ev.data() + ev.size());
  });
  return spectral::pool_spectrum(std::move(per_trial), spectral::SpectrumKind::eigen);
}

}  // namespace frp::block
