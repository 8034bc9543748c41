#include <doctest.h>

#include <algorithm>
#include <array>

#include <Eigen/Dense>

#include "frp/blockmatrix.hpp"
#include "frp/random.hpp"

using namespace frp;
using namespace frp::block;

namespace {

std::vector<ReducedWord> sorted_entries(const SymbolMatrix& m) {
  auto e = m.entries();
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST_CASE("smallest block matrix") {
  const auto w = build_word_block(WordFamily(2, 2), 1);
  REQUIRE(w.side() == 2);
  CHECK(w.at(0, 0) == ReducedWord{gen(1), gen(1)});
  CHECK(w.at(0, 1) == ReducedWord{gen(1), gen(2)});
  CHECK(w.at(1, 0) == ReducedWord{gen(2), gen(1)});
  CHECK(w.at(1, 1) == ReducedWord{gen(2), gen(2)});
}

TEST_CASE("k = 4 blocks hold the family") {
  for (std::uint32_t ell : {1u, 2u, 4u, 8u}) {
    const WordFamily family(generators_for(256, ell), ell);
    const auto w = build_word_block(family, 4);
    CHECK(w.side() == 16);
    CHECK(sorted_entries(w) == family.words());
  }
  CHECK_THROWS_AS(build_word_block(WordFamily(3, 2), 2), std::invalid_argument);
  CHECK_THROWS_AS(build_word_block(WordFamily(16, 2), 3), std::invalid_argument);
}

TEST_CASE("partial transpose follows the stated index map") {
  const WordFamily family(2, 8);
  const auto w = build_word_block(family, 4);
  const auto a = partial_transpose_2745(w);
  CHECK(sorted_entries(a) == sorted_entries(w));
  CHECK(a.at(0, 0) == w.at(0, 0));
  // A_{(i1,j3,i3,j1),(i4,j2,i2,j4)} = W_{(i1,i2,i3,i4),(j1,j2,j3,j4)} for every tuple
  auto bit = [](std::size_t v, int pos) { return (v >> (3 - pos)) & 1u; };
  auto pack = [](std::array<std::size_t, 4> b) { return (b[0] << 3) | (b[1] << 2) | (b[2] << 1) | b[3]; };
  for (std::size_t r = 0; r < 16; ++r) {
    for (std::size_t c = 0; c < 16; ++c) {
      const std::size_t ar = pack({bit(r, 0), bit(c, 2), bit(r, 2), bit(c, 0)});
      const std::size_t ac = pack({bit(r, 3), bit(c, 1), bit(r, 1), bit(c, 3)});
      CHECK(a.at(ar, ac) == w.at(r, c));
    }
  }
  CHECK_THROWS_AS(partial_transpose_2745(build_word_block(WordFamily(2, 2), 1)), std::invalid_argument);
}

TEST_CASE("index rearrangement is invertible") {
  const auto w = build_word_block(WordFamily(4, 4), 4);
  const std::array<int, 8> perm{3, 0, 7, 1, 6, 2, 5, 4};
  std::array<int, 8> inverse{};
  for (int i = 0; i < 8; ++i) inverse[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
  CHECK(rearrange_indices(rearrange_indices(w, perm), inverse) == w);
  const std::array<int, 8> bad{0, 0, 1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(rearrange_indices(w, bad), std::invalid_argument);
  // the partial transpose is an involution
  CHECK(partial_transpose_2745(partial_transpose_2745(w)) == w);
}

TEST_CASE("block_apply places lambda of each entry") {
  Rng rng(1);
  const auto rep = Representation::sample(MatrixKind::orthogonal, 2, 4, rng);
  const SymbolMatrix ident(0, {ReducedWord::identity()});
  CHECK((block_apply(rep, ident) - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  const auto w = build_word_block(WordFamily(2, 2), 1);
  const Eigen::MatrixXd big = block_apply(rep, w);
  REQUIRE(big.rows() == 8);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      const Eigen::MatrixXd blk = big.block(static_cast<Eigen::Index>(4 * r), static_cast<Eigen::Index>(4 * c), 4, 4);
      CHECK((blk - rep.apply_word(w.at(r, c))).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  const ReducedWord v{gen(1), inv(2)};
  const ReducedWord u{gen(2), gen(2)};
  const Eigen::MatrixXd prod = block_apply(rep, SymbolMatrix(0, {v * u}));
  CHECK((prod - block_apply(rep, SymbolMatrix(0, {v})) * block_apply(rep, SymbolMatrix(0, {u}))).cwiseAbs().maxCoeff() <=
        1e-12);

  const auto rep64 = Representation::sample(MatrixKind::permutation, 2, 64, rng);
  CHECK(block_apply(rep64, build_word_block(WordFamily(2, 8), 4)).rows() == 1024);
}

TEST_CASE("shuffle preserves entries and is reproducible") {
  const auto w = build_word_block(WordFamily(16, 2), 4);
  Rng a(4), b(4);
  const auto s1 = shuffle_entries(w, a);
  const auto s2 = shuffle_entries(w, b);
  CHECK(s1 == s2);
  CHECK(sorted_entries(s1) == sorted_entries(w));
  CHECK(!(s1 == w));
}

TEST_CASE("rank-one decomposition") {
  const auto v2 = rank_one_check(WordFamily(16, 2), 4);
  REQUIRE(v2.has_value());
  REQUIRE(v2->size() == 16);
  for (std::uint32_t i = 0; i < 16; ++i) CHECK((*v2)[i] == ReducedWord{gen(i + 1)});

  const auto v8 = rank_one_check(WordFamily(2, 8), 4);
  REQUIRE(v8.has_value());
  CHECK(v8->front() == parse_word("a1 a1 a1 a1"));
  CHECK((*v8)[1] == parse_word("a1 a1 a1 a2"));
  CHECK(v8->back() == parse_word("a2 a2 a2 a2"));

  CHECK(rank_one_check(WordFamily(4, 4), 4).has_value());
  CHECK(!rank_one_check(WordFamily(256, 1), 4).has_value());

  const auto w = build_word_block(WordFamily(4, 4), 4);
  const auto v4 = *rank_one_check(WordFamily(4, 4), 4);
  for (std::size_t r = 0; r < 16; ++r) {
    for (std::size_t c = 0; c < 16; ++c) CHECK(w.at(r, c) == v4[r] * v4[c]);
  }
}

TEST_CASE("rank-one block kernel has the spectrum of its dense factorisation") {
  // Block (r, c) is lambda(v_r) lambda(v_c), so lambda(W) = B C with B the
  // stacked lambda(v_r) and C the concatenated lambda(v_c).
  Rng rng(7);
  const std::size_t d = 8;
  const WordFamily family(4, 2);
  const auto rep = Representation::sample(MatrixKind::orthogonal, 4, d, rng);
  const auto w = build_word_block(family, 2);
  const auto v = rank_one_check(family, 2);
  REQUIRE(v.has_value());
  Eigen::MatrixXd col(static_cast<Eigen::Index>(4 * d), static_cast<Eigen::Index>(d));
  Eigen::MatrixXd row(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(4 * d));
  for (std::size_t i = 0; i < 4; ++i) {
    col.middleRows(static_cast<Eigen::Index>(i * d), static_cast<Eigen::Index>(d)) = rep.apply_word((*v)[i]);
    row.middleCols(static_cast<Eigen::Index>(i * d), static_cast<Eigen::Index>(d)) = rep.apply_word((*v)[i]);
  }
  const Eigen::MatrixXd big = block_apply(rep, w);
  CHECK((big - col * row).cwiseAbs().maxCoeff() <= 1e-12);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(big);
  const auto sv = svd.singularValues();
  // rank d with all nonzero singular values equal to 4 (= |v|)
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) CHECK(sv[i] == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(sv[static_cast<Eigen::Index>(d)] <= 1e-10);
}

TEST_CASE("permutation block kernel keeps eigenvalue one or more") {
  BlockSpectrumConfig cfg;
  cfg.d = 16;
  cfg.generators = 2;
  cfg.kind = MatrixKind::permutation;
  cfg.trials = 2;
  const auto a = partial_transpose_2745(build_word_block(WordFamily(2, 8), 4));
  const auto res = block_kernel_spectrum(a, cfg);
  CHECK(res.values.size() == 2 * 16 * 16);
  for (double m : res.trial_max) CHECK(m >= 1.0 - 1e-9);
}

TEST_CASE("block spectrum is thread-independent") {
  BlockSpectrumConfig cfg;
  cfg.d = 8;
  cfg.generators = 4;
  cfg.trials = 3;
  cfg.shuffle_each_trial = true;
  cfg.root_seed = 11;
  cfg.threads = 1;
  const auto a = build_word_block(WordFamily(4, 4), 4);
  const auto r1 = block_kernel_spectrum(a, cfg);
  cfg.threads = 3;
  const auto r2 = block_kernel_spectrum(a, cfg);
  CHECK(r1.values == r2.values);
  for (double v : r1.values) CHECK(v >= -1e-10);
}
