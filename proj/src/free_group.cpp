#include "frp/free_group.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <ostream>

namespace frp {

ReducedWord::ReducedWord(std::span<const Letter> letters) {
  letters_.reserve(letters.size());
  // Stack-based reduction: one pass exposes and cancels nested pairs.
  for (const Letter& l : letters) {
    if (l.generator == 0) throw std::invalid_argument("generator indices are 1-based");
    if (!letters_.empty() && letters_.back().cancels(l)) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

std::uint32_t ReducedWord::max_generator() const noexcept {
  std::uint32_t m = 0;
  for (const Letter& l : letters_) m = std::max(m, l.generator);
  return m;
}

ReducedWord ReducedWord::inverse() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverse());
  // Inverse of a reduced word is reduced; the constructor leaves it intact.
  return ReducedWord(out);
}

ReducedWord reduce(std::span<const Letter> letters) { return ReducedWord(letters); }

ReducedWord multiply(const ReducedWord& v, const ReducedWord& w) {
  auto lv = v.letters();
  auto lw = w.letters();
  std::vector<Letter> cat;
  cat.reserve(lv.size() + lw.size());
  cat.insert(cat.end(), lv.begin(), lv.end());
  cat.insert(cat.end(), lw.begin(), lw.end());
  return ReducedWord(cat);
}

std::size_t word_metric(const ReducedWord& g, const ReducedWord& h) {
  // Both operands are reduced, so only the common prefix cancels.
  auto a = g.letters();
  auto b = h.letters();
  std::size_t common = 0;
  while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
  return (a.size() - common) + (b.size() - common);
}

std::string to_string(const ReducedWord& w) {
  if (w.is_identity()) return "e";
  std::string out;
  for (const Letter& l : w.letters()) {
    if (!out.empty()) out += ' ';
    out += 'a';
    out += std::to_string(l.generator);
    if (l.inverted) out += "^-1";
  }
  return out;
}

ReducedWord parse_word(std::string_view text) {
  std::vector<Letter> letters;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  const auto first = text.find_first_not_of(" \t");
  const auto last = text.find_last_not_of(" \t");
  if (first != std::string_view::npos && text.substr(first, last - first + 1) == "e") return {};
  skip_ws();
  while (pos < text.size()) {
    if (text[pos] != 'a') throw std::invalid_argument("malformed word: " + std::string(text));
    ++pos;
    std::uint32_t index = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), index);
    if (ec != std::errc{} || index == 0) {
      throw std::invalid_argument("bad generator index in word: " + std::string(text));
    }
    pos = static_cast<std::size_t>(ptr - text.data());
    bool inverted = false;
    if (text.substr(pos, 3) == "^-1") {
      inverted = true;
      pos += 3;
    }
    letters.push_back({index, inverted});
    if (pos < text.size() && text[pos] != ' ' && text[pos] != '\t') {
      throw std::invalid_argument("malformed word: " + std::string(text));
    }
    skip_ws();
  }
  if (letters.empty()) throw std::invalid_argument("empty word text; identity is written 'e'");
  return ReducedWord(letters);
}

std::ostream& operator<<(std::ostream& os, const ReducedWord& w) { return os << to_string(w); }

WordFamily::WordFamily(std::uint32_t n, std::uint32_t ell) : n_(n), ell_(ell) {
  if (n == 0 || ell == 0) throw std::invalid_argument("word family needs n >= 1 and ell >= 1");
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < ell; ++i) {
    count *= n;
    if (count > std::numeric_limits<std::uint32_t>::max()) {
      throw std::overflow_error("n^ell exceeds the supported family size");
    }
  }
  words_.reserve(count);
  std::vector<Letter> letters(ell, gen(1));
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    // Most significant digit first gives lexicographic order.
    std::uint64_t rest = idx;
    for (std::uint32_t pos = ell; pos-- > 0;) {
      letters[pos] = gen(static_cast<std::uint32_t>(rest % n) + 1);
      rest /= n;
    }
    words_.emplace_back(letters);
  }
}

std::size_t WordFamily::index_of(const ReducedWord& w) const {
  if (w.length() != ell_) throw std::invalid_argument("word length differs from family");
  std::size_t idx = 0;
  for (const Letter& l : w.letters()) {
    if (l.inverted || l.generator > n_) throw std::invalid_argument("word not in family");
    idx = idx * n_ + (l.generator - 1);
  }
  return idx;
}

std::uint32_t generators_for(std::uint64_t n_words, std::uint32_t ell) {
  if (n_words == 0 || ell == 0) throw std::invalid_argument("n_w and ell must be positive");
  for (std::uint64_t n = 1;; ++n) {
    std::uint64_t p = 1;
    for (std::uint32_t i = 0; i < ell && p <= n_words; ++i) p *= n;
    if (p == n_words) return static_cast<std::uint32_t>(n);
    if (p > n_words) break;
  }
  throw std::invalid_argument("n_w = " + std::to_string(n_words) + " is not a perfect power for ell = " +
                              std::to_string(ell));
}

std::size_t sample_word_index(std::size_t size, Rng& rng) {
  if (size == 0) throw std::invalid_argument("cannot sample from an empty family");
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

const ReducedWord& sample_word(const WordFamily& family, Rng& rng) {
  return family[sample_word_index(family.size(), rng)];
}

}  // namespace frp
