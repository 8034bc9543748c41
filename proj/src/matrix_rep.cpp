#include "frp/matrix_rep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/QR>

#include "frp/config.hpp"
#include "frp/csv.hpp"

namespace frp {

std::string_view to_string(MatrixKind kind) {
  return kind == MatrixKind::orthogonal ? "orthogonal" : "permutation";
}

MatrixKind parse_matrix_kind(std::string_view text) {
  if (text == "orthogonal") return MatrixKind::orthogonal;
  if (text == "permutation") return MatrixKind::permutation;
  throw std::invalid_argument("unknown matrix kind: " + std::string(text));
}

OrthogonalMatrix::OrthogonalMatrix(Eigen::MatrixXd m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw std::invalid_argument("orthogonal matrix must be square");
  const double err =
      (m_.transpose() * m_ - Eigen::MatrixXd::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
  if (err > tol) throw std::invalid_argument("matrix is not orthogonal");
}

PermutationMatrix::PermutationMatrix(std::vector<std::uint32_t> sigma) : sigma_(std::move(sigma)) {
  std::vector<bool> seen(sigma_.size(), false);
  for (auto s : sigma_) {
    if (s >= sigma_.size() || seen[s]) throw std::invalid_argument("permutation is not a bijection");
    seen[s] = true;
  }
}

PermutationMatrix PermutationMatrix::identity(std::size_t d) {
  std::vector<std::uint32_t> s(d);
  std::iota(s.begin(), s.end(), 0u);
  return PermutationMatrix(std::move(s));
}

PermutationMatrix PermutationMatrix::inverse() const {
  std::vector<std::uint32_t> s(sigma_.size());
  for (std::size_t j = 0; j < sigma_.size(); ++j) s[sigma_[j]] = static_cast<std::uint32_t>(j);
  return PermutationMatrix(std::move(s));
}

PermutationMatrix PermutationMatrix::compose(const PermutationMatrix& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("permutation dimension mismatch");
  // (A B) e_j = A e_{tau(j)} = e_{sigma(tau(j))}.
  std::vector<std::uint32_t> s(sigma_.size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = sigma_[other.sigma_[j]];
  return PermutationMatrix(std::move(s));
}

Eigen::VectorXd PermutationMatrix::apply(const Eigen::VectorXd& v) const {
  if (static_cast<std::size_t>(v.size()) != dim()) throw std::invalid_argument("vector length mismatch");
  Eigen::VectorXd out(v.size());
  for (std::size_t j = 0; j < sigma_.size(); ++j) out[sigma_[j]] = v[static_cast<Eigen::Index>(j)];
  return out;
}

Eigen::MatrixXd PermutationMatrix::dense() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) m(sigma_[j], j) = 1.0;
  return m;
}

OrthogonalMatrix sample_haar_orthogonal(std::size_t d, Rng& rng) {
  if (d == 0) throw std::invalid_argument("dimension must be positive");
  const auto n = static_cast<Eigen::Index>(d);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) g(r, c) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const auto& packed = qr.matrixQR();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (packed(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  return OrthogonalMatrix(std::move(q));
}

PermutationMatrix sample_uniform_permutation(std::size_t d, Rng& rng) {
  if (d == 0) throw std::invalid_argument("dimension must be positive");
  std::vector<std::uint32_t> s(d);
  std::iota(s.begin(), s.end(), 0u);
  for (std::size_t i = d - 1; i > 0; --i) {
    const auto j = std::uniform_int_distribution<std::size_t>(0, i)(rng);
    std::swap(s[i], s[j]);
  }
  return PermutationMatrix(std::move(s));
}

Representation Representation::orthogonal(std::vector<OrthogonalMatrix> generators) {
  if (generators.empty()) throw std::invalid_argument("representation needs at least one generator");
  Representation rep(MatrixKind::orthogonal, static_cast<std::size_t>(generators.front().dim()));
  for (auto& g : generators) {
    if (static_cast<std::size_t>(g.dim()) != rep.d_) throw std::invalid_argument("generator dimension mismatch");
    rep.dense_.push_back(g.matrix());
  }
  return rep;
}

Representation Representation::permutation(std::vector<PermutationMatrix> generators) {
  if (generators.empty()) throw std::invalid_argument("representation needs at least one generator");
  Representation rep(MatrixKind::permutation, generators.front().dim());
  for (auto& g : generators) {
    if (g.dim() != rep.d_) throw std::invalid_argument("generator dimension mismatch");
    rep.dense_.push_back(g.dense());
  }
  rep.perms_ = std::move(generators);
  return rep;
}

Representation Representation::sample(MatrixKind kind, std::uint32_t n, std::size_t d, Rng& rng) {
  if (n == 0) throw std::invalid_argument("representation needs at least one generator");
  if (kind == MatrixKind::orthogonal) {
    std::vector<OrthogonalMatrix> gens;
    gens.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) gens.push_back(sample_haar_orthogonal(d, rng));
    return orthogonal(std::move(gens));
  }
  std::vector<PermutationMatrix> gens;
  gens.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) gens.push_back(sample_uniform_permutation(d, rng));
  return permutation(std::move(gens));
}

const Eigen::MatrixXd& Representation::generator(std::uint32_t i) const {
  if (i == 0 || i > dense_.size()) throw std::out_of_range("generator index out of range");
  return dense_[i - 1];
}

const PermutationMatrix& Representation::permutation_generator(std::uint32_t i) const {
  if (kind_ != MatrixKind::permutation) throw std::logic_error("not a permutation representation");
  if (i == 0 || i > perms_.size()) throw std::out_of_range("generator index out of range");
  return perms_[i - 1];
}

void Representation::check_word(const ReducedWord& w) const {
  if (w.max_generator() > dense_.size()) {
    throw std::out_of_range("word " + to_string(w) + " uses a generator beyond n = " +
                            std::to_string(dense_.size()));
  }
}

Eigen::MatrixXd Representation::apply_word(const ReducedWord& w) const {
  check_word(w);
  const auto d = static_cast<Eigen::Index>(d_);
  if (w.is_identity()) return Eigen::MatrixXd::Identity(d, d);
  auto letters = w.letters();
  Eigen::MatrixXd acc = letters[0].inverted ? Eigen::MatrixXd(dense_[letters[0].generator - 1].transpose())
                                            : dense_[letters[0].generator - 1];
  Eigen::MatrixXd tmp(d, d);
  for (std::size_t k = 1; k < letters.size(); ++k) {
    const auto& u = dense_[letters[k].generator - 1];
    if (letters[k].inverted) {
      tmp.noalias() = acc * u.transpose();
    } else {
      tmp.noalias() = acc * u;
    }
    acc.swap(tmp);
  }
  return acc;
}

Eigen::VectorXd Representation::apply_word(const ReducedWord& w, const Eigen::VectorXd& v) const {
  check_word(w);
  if (static_cast<std::size_t>(v.size()) != d_) throw std::invalid_argument("vector length mismatch");
  Eigen::VectorXd out = v;
  Eigen::VectorXd tmp(v.size());
  auto letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    const auto& u = dense_[it->generator - 1];
    if (it->inverted) {
      tmp.noalias() = u.transpose() * out;
    } else {
      tmp.noalias() = u * out;
    }
    out.swap(tmp);
  }
  return out;
}

PermutationMatrix Representation::apply_word_permutation(const ReducedWord& w) const {
  if (kind_ != MatrixKind::permutation) throw std::logic_error("not a permutation representation");
  check_word(w);
  PermutationMatrix acc = PermutationMatrix::identity(d_);
  for (const Letter& l : w.letters()) {
    const auto& p = perms_[l.generator - 1];
    acc = acc.compose(l.inverted ? p.inverse() : p);
  }
  return acc;
}

double trace_correlation(const Representation& rep, const ReducedWord& v, const ReducedWord& w) {
  const Eigen::MatrixXd a = rep.apply_word(v);
  const Eigen::MatrixXd b = rep.apply_word(w);
  // Tr(A^T B) is the Frobenius inner product.
  return a.cwiseProduct(b).sum() / static_cast<double>(rep.dim());
}

double vector_correlation(const Representation& rep, const ReducedWord& v, const ReducedWord& w,
                          const Eigen::VectorXd& xi) {
  return rep.apply_word(v, xi).dot(rep.apply_word(w, xi));
}

FrpOperator::FrpOperator(const Representation& rep, ReducedWord word, std::size_t d_env, std::size_t d_in,
                         double scale)
    : word_(std::move(word)), scale_(scale), d_env_(d_env), d_(rep.dim()), d_in_(d_in) {
  if (d_env_ > d_) throw std::invalid_argument("observation dimension exceeds projection dimension");
  if (d_env_ == 0 || d_in_ == 0) throw std::invalid_argument("operator dimensions must be positive");
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw std::invalid_argument("scale must be positive");
  const Eigen::MatrixXd lambda = rep.apply_word(word_);
  const auto rows = static_cast<Eigen::Index>(std::min(d_in_, d_));
  matrix_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d_in_), static_cast<Eigen::Index>(d_env_));
  matrix_.topRows(rows) = scale_ * lambda.topLeftCorner(rows, static_cast<Eigen::Index>(d_env_));
}

Eigen::VectorXd FrpOperator::project(const Eigen::VectorXd& observation) const {
  if (static_cast<std::size_t>(observation.size()) != d_env_) {
    throw std::invalid_argument("observation length " + std::to_string(observation.size()) + " != d_env " +
                                std::to_string(d_env_));
  }
  return matrix_ * observation;
}

void save_representation(const Representation& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.txt", std::ios::binary);
  if (!manifest) throw std::runtime_error("cannot write manifest in " + dir.string());
  manifest << "kind=" << to_string(rep.kind()) << '\n'
           << "d=" << rep.dim() << '\n'
           << "n=" << rep.generator_count() << '\n';
  for (std::uint32_t i = 1; i <= rep.generator_count(); ++i) {
    const std::string file = "U" + std::to_string(i) + ".csv";
    manifest << "generator_" << i << '=' << file << '\n';
    write_matrix_csv(dir / file, rep.generator(i));
  }
}

Representation load_representation(const std::filesystem::path& dir) {
  const auto cfg = KeyValueConfig::load(dir / "manifest.txt");
  const auto kind = parse_matrix_kind(cfg.get("kind").value_or(""));
  const auto d = cfg.get_int("d", 0);
  const auto n = cfg.get_int("n", 0);
  if (d <= 0 || n <= 0) throw std::runtime_error("manifest needs positive d and n");
  std::vector<Eigen::MatrixXd> mats;
  for (long long i = 1; i <= n; ++i) {
    auto file = cfg.get("generator_" + std::to_string(i));
    if (!file) throw std::runtime_error("manifest missing generator_" + std::to_string(i));
    mats.push_back(read_matrix_csv(dir / *file));
    if (mats.back().rows() != d || mats.back().cols() != d) throw std::runtime_error("generator shape mismatch");
  }
  if (kind == MatrixKind::orthogonal) {
    std::vector<OrthogonalMatrix> gens;
    for (auto& m : mats) gens.emplace_back(std::move(m));
    return Representation::orthogonal(std::move(gens));
  }
  std::vector<PermutationMatrix> gens;
  for (const auto& m : mats) {
    std::vector<std::uint32_t> sigma(static_cast<std::size_t>(d), 0);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      Eigen::Index row = 0;
      if (m.col(j).maxCoeff(&row) != 1.0) throw std::runtime_error("column is not a unit vector");
      sigma[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(row);
    }
    PermutationMatrix p(std::move(sigma));
    if (p.dense() != m) throw std::runtime_error("matrix is not a permutation");
    gens.push_back(std::move(p));
  }
  return Representation::permutation(std::move(gens));
}

}  // namespace frp
