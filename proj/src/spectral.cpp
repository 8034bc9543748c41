#include "frp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "frp/parallel.hpp"
#include "frp/random.hpp"

namespace frp::spectral {

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi >= lo) || count == 0) throw std::invalid_argument("invalid log grid");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

Eigen::MatrixXd word_sum_matrix(const Representation& rep, const WordFamily& family) {
  if (rep.generator_count() != family.n()) {
    throw std::invalid_argument("representation has " + std::to_string(rep.generator_count()) +
                                " generators but the family uses " + std::to_string(family.n()));
  }
  const auto d = static_cast<Eigen::Index>(rep.dim());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
  for (const auto& w : family) sum += rep.apply_word(w);
  return sum;
}

Eigen::MatrixXd generator_sum_power(const Representation& rep, std::uint32_t ell) {
  if (ell == 0) throw std::invalid_argument("ell must be positive");
  const auto d = static_cast<Eigen::Index>(rep.dim());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d, d);
  for (std::uint32_t i = 1; i <= rep.generator_count(); ++i) t += rep.generator(i);
  Eigen::MatrixXd acc = t;
  Eigen::MatrixXd tmp(d, d);
  for (std::uint32_t k = 1; k < ell; ++k) {
    tmp.noalias() = acc * t;
    acc.swap(tmp);
  }
  return acc;
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  if (values.empty()) return h;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  h.lo = *mn;
  h.hi = *mx > *mn ? *mx : *mn + 1.0;
  const double width = h.bin_width();
  for (double v : values) {
    auto bin = static_cast<std::size_t>((v - h.lo) / width);
    h.counts[std::min(bin, bins - 1)] += 1;
  }
  return h;
}

namespace {

Rng trial_rng(std::uint64_t root, std::uint32_t ell, std::size_t trial) {
  return make_rng(derive_seed(root, ell), trial);
}

}  // namespace

SpectrumResult pool_spectrum(std::vector<std::vector<double>> per_trial, SpectrumKind kind) {
  SpectrumResult out;
  out.kind = kind;
  out.trials = per_trial.size();
  out.per_trial = per_trial.empty() ? 0 : per_trial.front().size();
  for (auto& v : per_trial) {
    out.trial_max.push_back(v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()));
    out.values.insert(out.values.end(), v.begin(), v.end());
  }
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

SpectrumResult esd(const EsdConfig& cfg) {
  const auto n = generators_for(cfg.n_words, cfg.ell);
  const double norm = 1.0 / std::sqrt(static_cast<double>(cfg.n_words));
  std::vector<std::vector<double>> per_trial(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    Rng rng = trial_rng(cfg.root_seed, cfg.ell, t);
    const auto rep = Representation::sample(cfg.kind, n, cfg.d, rng);
    const Eigen::MatrixXd s = norm * generator_sum_power(rep, cfg.ell);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(s).singularValues();
    per_trial[t].assign(sv.data(), sv.data() + sv.size());
  });
  return pool_spectrum(std::move(per_trial), SpectrumKind::singular);
}

Eigen::MatrixXd kernel_from_word_sum(const Eigen::MatrixXd& x, const Eigen::MatrixXd& word_sum, double n_words) {
  if (word_sum.cols() != x.rows()) throw std::invalid_argument("sample dimension differs from word sum");
  if (!(n_words > 0.0)) throw std::invalid_argument("n_words must be positive");
  const Eigen::MatrixXd sx = word_sum * x;
  Eigen::MatrixXd k = sx.transpose() * sx / n_words;
  return k;
}

Eigen::MatrixXd empirical_kernel(const Eigen::MatrixXd& x, const Representation& rep, const WordFamily& family) {
  if (static_cast<std::size_t>(x.rows()) != rep.dim()) throw std::invalid_argument("X rows must equal d");
  return kernel_from_word_sum(x, word_sum_matrix(rep, family), static_cast<double>(family.size()));
}

std::vector<double> effective_dimension_curve(const Eigen::VectorXd& eigenvalues, const std::vector<double>& gammas) {
  std::vector<double> out;
  out.reserve(gammas.size());
  for (double g : gammas) {
    if (!(g > 0.0)) throw std::invalid_argument("gamma must be positive");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
      const double l = std::max(eigenvalues[i], 0.0);
      sum += l / (l + g);
    }
    out.push_back(sum);
  }
  return out;
}

double effective_dimension(const Eigen::MatrixXd& k, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (k.rows() != k.cols()) throw std::invalid_argument("kernel must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k, Eigen::EigenvaluesOnly);
  return effective_dimension_curve(eig.eigenvalues(), {gamma}).front();
}

double mp_s_transform(double z, double c) {
  if (z + c == 0.0) throw std::domain_error("S-transform pole at z = -c");
  return 1.0 / (z + c);
}

double chi(double z, std::uint32_t ell, double n, double c) {
  return z / (z + 1.0) * std::pow((z / n + 1.0) / (z + 1.0), static_cast<double>(ell)) * mp_s_transform(z, c);
}

double newton_target(double y, double gamma, std::uint32_t ell, double n, double c) {
  const double l = static_cast<double>(ell);
  return -gamma * y * std::pow(1.0 - y / n, l) + std::pow(1.0 - y, l + 1.0) * (c - y);
}

double newton_target_derivative(double y, double gamma, std::uint32_t ell, double n, double c) {
  const double l = static_cast<double>(ell);
  const double a = 1.0 - y / n;
  const double b = 1.0 - y;
  return -gamma * std::pow(a, l) + gamma * y * l * std::pow(a, l - 1.0) / n -
         (l + 1.0) * std::pow(b, l) * (c - y) - std::pow(b, l + 1.0);
}

TheoryResult solve_theoretical_eff_dim(double gamma, std::uint32_t ell, std::uint64_t n_words, double c,
                                       double tolerance, std::size_t max_iter) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  const double n = static_cast<double>(generators_for(n_words, ell));
  auto f = [&](double y) { return newton_target(y, gamma, ell, n, c); };
  auto fp = [&](double y) { return newton_target_derivative(y, gamma, ell, n, c); };

  double lo = 0.0;
  double hi = 1.0;
  if (!(f(lo) > 0.0 && f(hi) < 0.0)) {
    throw std::domain_error("no sign change of F on (0,1); parameters admit no root");
  }
  TheoryResult out;
  double y = 0.5;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const double fy = f(y);
    if (fy > 0.0) {
      lo = y;
    } else {
      hi = y;
    }
    const double slope = fp(y);
    double next = slope != 0.0 ? y - fy / slope : lo - 1.0;
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
      ++out.bisection_steps;
    }
    const double step = std::abs(next - y);
    y = next;
    out.iterations = it;
    if (step <= tolerance && std::abs(f(y)) <= tolerance) {
      out.value = y;
      out.residual = std::abs(f(y));
      return out;
    }
  }
  throw std::runtime_error("Newton iteration did not converge");
}

std::vector<EffDimRow> effdim_experiment(const KernelConfig& cfg) {
  if (cfg.d == 0 || cfg.p == 0 || cfg.trials == 0) throw std::invalid_argument("d, p and trials must be positive");
  std::vector<std::uint32_t> generators;
  for (auto ell : cfg.ells) generators.push_back(generators_for(cfg.n_words, ell));

  std::vector<EffDimRow> rows;
  for (std::size_t k = 0; k < cfg.ells.size(); ++k) {
    const auto ell = cfg.ells[k];
    std::vector<std::vector<double>> per_trial(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
      Rng rng = trial_rng(cfg.root_seed, ell, t);
      const auto rep = Representation::sample(MatrixKind::orthogonal, generators[k], cfg.d, rng);
      const Eigen::MatrixXd s = generator_sum_power(rep, ell);
      std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(cfg.d)));
      Eigen::MatrixXd x(static_cast<Eigen::Index>(cfg.d), static_cast<Eigen::Index>(cfg.p));
      for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = normal(rng);
      const Eigen::MatrixXd kernel = kernel_from_word_sum(x, s, static_cast<double>(cfg.n_words));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(kernel, Eigen::EigenvaluesOnly);
      auto curve = effective_dimension_curve(eig.eigenvalues(), cfg.gammas);
      for (double& v : curve) v /= static_cast<double>(cfg.p);
      per_trial[t] = std::move(curve);
    });
    for (std::size_t g = 0; g < cfg.gammas.size(); ++g) {
      double mean = 0.0;
      for (const auto& tr : per_trial) mean += tr[g];
      mean /= static_cast<double>(cfg.trials);
      double var = 0.0;
      for (const auto& tr : per_trial) var += (tr[g] - mean) * (tr[g] - mean);
      const double stderr_ =
          cfg.trials > 1 ? std::sqrt(var / static_cast<double>(cfg.trials - 1) / static_cast<double>(cfg.trials))
                         : 0.0;
      rows.push_back({cfg.gammas[g], ell, mean, stderr_,
                      theoretical_eff_dim(cfg.gammas[g], ell, cfg.n_words, cfg.ratio())});
    }
  }
  return rows;
}

}  // namespace frp::spectral
