#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "frp/random.hpp"

namespace frp {

/// A generator a_i or its inverse. Generator indices are 1-based.
struct Letter {
  std::uint32_t generator = 1;
  bool inverted = false;

  Letter inverse() const noexcept { return {generator, !inverted}; }
  bool cancels(const Letter& other) const noexcept {
    return generator == other.generator && inverted != other.inverted;
  }

  auto operator<=>(const Letter&) const = default;
};

/// Shorthand for a positive letter a_i.
inline Letter gen(std::uint32_t i) { return {i, false}; }
/// Shorthand for a_i^{-1}.
inline Letter inv(std::uint32_t i) { return {i, true}; }

/// Element of the free group F_n, stored as its unique cancellation-free
/// letter sequence. The empty sequence is the identity e.
class ReducedWord {
 public:
  ReducedWord() = default;
  /// Freely reduces `letters`.
  explicit ReducedWord(std::span<const Letter> letters);
  ReducedWord(std::initializer_list<Letter> letters)
      : ReducedWord(std::span<const Letter>(letters.begin(), letters.size())) {}

  static ReducedWord identity() { return {}; }

  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }
  /// Largest generator index used, 0 for e.
  std::uint32_t max_generator() const noexcept;

  ReducedWord inverse() const;

  auto operator<=>(const ReducedWord&) const = default;

 private:
  std::vector<Letter> letters_;
};

/// Free reduction of an arbitrary letter sequence.
ReducedWord reduce(std::span<const Letter> letters);
ReducedWord multiply(const ReducedWord& v, const ReducedWord& w);
inline ReducedWord operator*(const ReducedWord& v, const ReducedWord& w) { return multiply(v, w); }

/// Word metric d(g, h) = |g^{-1} h| on the Cayley tree.
std::size_t word_metric(const ReducedWord& g, const ReducedWord& h);

/// `a1 a3 a2 a4^-1`, or `e` for the identity.
std::string to_string(const ReducedWord& w);
/// Inverse of to_string. Throws std::invalid_argument on malformed input
/// (including the forbidden generator index 0).
ReducedWord parse_word(std::string_view text);
std::ostream& operator<<(std::ostream& os, const ReducedWord& w);

/// The n^ell positive words a_{i_1} ... a_{i_ell} in lexicographic order.
class WordFamily {
 public:
  /// Throws std::invalid_argument for n == 0 or ell == 0 and
  /// std::overflow_error when n^ell does not fit in 32 bits.
  WordFamily(std::uint32_t n, std::uint32_t ell);

  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t ell() const noexcept { return ell_; }
  std::size_t size() const noexcept { return words_.size(); }
  const ReducedWord& operator[](std::size_t i) const { return words_[i]; }
  const std::vector<ReducedWord>& words() const noexcept { return words_; }
  auto begin() const noexcept { return words_.begin(); }
  auto end() const noexcept { return words_.end(); }

  /// Position of a positive word of length ell in the lexicographic order.
  std::size_t index_of(const ReducedWord& w) const;

 private:
  std::uint32_t n_;
  std::uint32_t ell_;
  std::vector<ReducedWord> words_;
};

inline WordFamily word_family(std::uint32_t n, std::uint32_t ell) { return {n, ell}; }

/// Integer n with n^ell == n_w; throws std::invalid_argument when n_w is not
/// a perfect ell-th power.
std::uint32_t generators_for(std::uint64_t n_words, std::uint32_t ell);

/// Uniform index into a family of `size` words.
std::size_t sample_word_index(std::size_t size, Rng& rng);
/// Uniform draw from the family.
const ReducedWord& sample_word(const WordFamily& family, Rng& rng);

}  // namespace frp
