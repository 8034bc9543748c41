// Command-line driver for the free random projection experiments.
//
// Every subcommand takes --seed and --threads; outputs depend only on the
// seed. Exit codes: 0 success, 2 invalid flags, 1 runtime failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frp/blockmatrix.hpp"
#include "frp/config.hpp"
#include "frp/csv.hpp"
#include "frp/env_harness.hpp"
#include "frp/lsmdp.hpp"
#include "frp/orbital.hpp"
#include "frp/parallel.hpp"
#include "frp/spectral.hpp"
#include "frp/stats.hpp"
#include "frp/svg.hpp"

namespace fs = std::filesystem;

namespace {

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Common {
  std::uint64_t seed = 0;
  unsigned threads = frp::default_threads();
};

std::string g_config_path;

void add_config_flag(CLI::App* sub) {
  sub->add_option("--config", g_config_path, "key=value file with flag defaults; explicit flags win");
}

bool flag_given(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Expands --config FILE into --key=value arguments placed before the explicit
// flags of the subcommand, skipping keys that are given explicitly.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  frp::KeyValueConfig cfg;
  try {
    cfg = frp::KeyValueConfig::load(path);
  } catch (const std::exception& e) {
    throw ValidationError(e.what());
  }
  const auto sub = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) { return a.rfind('-', 0) != 0; });
  if (sub == args.end()) return args;
  std::vector<std::string> injected;
  for (const auto& [key, value] : cfg.entries()) {
    if (key == "config") throw ValidationError("config files cannot include other config files");
    if (!flag_given(args, key)) injected.push_back("--" + key + "=" + value);
  }
  args.insert(sub + 1, injected.begin(), injected.end());
  return args;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Root seed for all randomness")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  add_config_flag(sub);
}

std::vector<std::uint32_t> validate_ells(std::uint64_t n_words, const std::vector<std::uint32_t>& ells) {
  std::vector<std::uint32_t> gens;
  for (auto ell : ells) {
    try {
      gens.push_back(frp::generators_for(n_words, ell));
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }
  return gens;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

// ---------------------------------------------------------------- lsmdp-meta

struct LsmdpArgs {
  Common common;
  std::string topology = "both";
  std::uint32_t seeds = 10;
  std::uint64_t nw = 256;
  std::vector<std::uint32_t> ells{1, 2, 4, 8};
  double gamma = 0.95;
  double alpha = 1.0;
  std::string out = "lsmdp_meta.csv";
};

void run_lsmdp(const LsmdpArgs& a) {
  validate_ells(a.nw, a.ells);
  std::vector<frp::lsmdp::Topology> tops;
  if (a.topology == "both") {
    tops = {frp::lsmdp::Topology::lattice, frp::lsmdp::Topology::tree};
  } else {
    try {
      tops = {frp::lsmdp::parse_topology(a.topology)};
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }
  if (!(a.gamma > 0.0 && a.gamma < 1.0) || !(a.alpha > 0.0)) throw ValidationError("need gamma in (0,1), alpha > 0");
  ensure_parent(a.out);
  frp::CsvWriter csv(a.out, {"topology", "ell", "seed", "kl", "l1_policy", "l2_z", "l1_z"});
  for (auto top : tops) {
    frp::lsmdp::MetaConfig cfg;
    cfg.topology = top;
    cfg.n_words = a.nw;
    cfg.ells = a.ells;
    cfg.seeds = a.seeds;
    cfg.root_seed = a.common.seed;
    cfg.gamma = a.gamma;
    cfg.alpha = a.alpha;
    cfg.threads = a.common.threads;
    for (const auto& row : frp::lsmdp::run_meta_experiment(cfg)) {
      const auto& m = row.metrics;
      csv.cell(frp::lsmdp::to_string(row.topology)).cell(static_cast<long long>(row.ell))
          .cell(static_cast<long long>(row.seed)).cell(m.kl).cell(m.l1_policy).cell(m.l2_z).cell(m.l1_z);
      csv.end_row();
      std::cout << frp::lsmdp::to_string(row.topology) << " ell=" << row.ell << " seed=" << row.seed
                << " kl=" << m.kl << " l1_policy=" << m.l1_policy << " l2_z=" << m.l2_z << " l1_z=" << m.l1_z
                << '\n';
    }
  }
}

// -------------------------------------------------------------------- effdim

struct EffdimArgs {
  Common common;
  std::size_t d = 64;
  std::size_t p = 64;
  std::uint64_t nw = 256;
  std::vector<std::uint32_t> ells{1, 2, 4, 8};
  std::size_t trials = 128;
  double gamma_min = 1e-4;
  double gamma_max = 1e-1;
  std::size_t gamma_count = 20;
  std::string out = "effdim.csv";
};

void run_effdim(const EffdimArgs& a) {
  validate_ells(a.nw, a.ells);
  if (!(a.gamma_min > 0.0 && a.gamma_max >= a.gamma_min)) throw ValidationError("need 0 < gamma-min <= gamma-max");
  frp::spectral::KernelConfig cfg;
  cfg.d = a.d;
  cfg.p = a.p;
  cfg.n_words = a.nw;
  cfg.ells = a.ells;
  cfg.trials = a.trials;
  cfg.gammas = frp::spectral::log_grid(a.gamma_min, a.gamma_max, a.gamma_count);
  cfg.root_seed = a.common.seed;
  cfg.threads = a.common.threads;
  const auto rows = frp::spectral::effdim_experiment(cfg);
  ensure_parent(a.out);
  frp::CsvWriter csv(a.out, {"gamma", "ell", "empirical_mean", "empirical_stderr", "theory"});
  for (const auto& r : rows) {
    csv.cell(r.gamma).cell(static_cast<long long>(r.ell)).cell(r.empirical_mean).cell(r.empirical_stderr).cell(r.theory);
    csv.end_row();
    std::cout << "gamma=" << r.gamma << " ell=" << r.ell << " empirical=" << r.empirical_mean << " +- "
              << r.empirical_stderr << " theory=" << r.theory << '\n';
  }
}

// ----------------------------------------------------------------------- esd

struct EsdArgs {
  Common common;
  std::size_t d = 64;
  std::uint64_t nw = 256;
  std::vector<std::uint32_t> ells{1, 2, 4, 8};
  std::size_t trials = 128;
  std::size_t bins = 50;
  std::string kind = "orthogonal";
  std::string out_dir = "esd";
  bool svg = false;
};

void run_esd(const EsdArgs& a) {
  validate_ells(a.nw, a.ells);
  frp::MatrixKind kind;
  try {
    kind = frp::parse_matrix_kind(a.kind);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  fs::create_directories(a.out_dir);
  for (auto ell : a.ells) {
    frp::spectral::EsdConfig cfg{a.d, a.nw, ell, a.trials, kind, a.common.seed, a.common.threads};
    const auto res = frp::spectral::esd(cfg);
    const auto stem = "esd_" + a.kind + "_ell" + std::to_string(ell);
    frp::write_column_csv(fs::path(a.out_dir) / (stem + ".csv"), "singular_value", res.values);
    if (a.svg) {
      write_text(fs::path(a.out_dir) / (stem + ".svg"),
                 frp::svg::histogram(frp::spectral::make_histogram(res.values, a.bins),
                                     "ESD of n_w^-1/2 sum lambda(w), ell=" + std::to_string(ell)));
    }
    std::cout << "ell=" << ell << " values=" << res.values.size() << " max=" << res.values.front()
              << " mean=" << frp::stats::mean(res.values) << '\n';
  }
}

// ------------------------------------------------------------ block-spectrum

struct BlockArgs {
  Common common;
  std::size_t d = 64;
  std::uint32_t k = 4;
  std::vector<std::uint32_t> ells{1, 2, 4, 8};
  std::size_t trials = 32;
  std::size_t bins = 50;
  std::string kind = "orthogonal";
  std::string arrangement = "partial-transpose";
  std::string out_dir = "block";
  bool svg = false;
};

void run_block(const BlockArgs& a) {
  if (a.k == 0 || a.k > 8) throw ValidationError("k must lie in [1, 8]");
  const std::uint64_t nw = std::uint64_t{1} << (2 * a.k);
  const auto gens = validate_ells(nw, a.ells);
  for (auto ell : a.ells) {
    if ((2 * a.k) % ell != 0) throw ValidationError("ell must divide 2k");
  }
  frp::MatrixKind kind;
  try {
    kind = frp::parse_matrix_kind(a.kind);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  if (a.arrangement != "partial-transpose" && a.arrangement != "raw" && a.arrangement != "shuffled") {
    throw ValidationError("arrangement must be partial-transpose, raw or shuffled");
  }
  if (a.arrangement == "partial-transpose" && a.k != 4) throw ValidationError("partial transpose needs k = 4");
  fs::create_directories(a.out_dir);
  for (std::size_t i = 0; i < a.ells.size(); ++i) {
    const frp::WordFamily family(gens[i], a.ells[i]);
    auto w = frp::block::build_word_block(family, a.k);
    if (a.arrangement == "partial-transpose") w = frp::block::partial_transpose_2745(w);
    frp::block::BlockSpectrumConfig cfg;
    cfg.d = a.d;
    cfg.generators = gens[i];
    cfg.kind = kind;
    cfg.trials = a.trials;
    cfg.shuffle_each_trial = a.arrangement == "shuffled";
    cfg.root_seed = frp::derive_seed(a.common.seed, a.ells[i]);
    cfg.threads = a.common.threads;
    const auto res = frp::block::block_kernel_spectrum(w, cfg);
    const auto stem = "block_" + a.kind + "_" + a.arrangement + "_ell" + std::to_string(a.ells[i]);
    frp::write_column_csv(fs::path(a.out_dir) / (stem + ".csv"), "eigenvalue", res.values);
    if (a.svg) {
      write_text(fs::path(a.out_dir) / (stem + ".svg"),
                 frp::svg::histogram(frp::spectral::make_histogram(res.values, a.bins),
                                     "Block kernel ESD, ell=" + std::to_string(a.ells[i])));
    }
    std::cout << "ell=" << a.ells[i] << " values=" << res.values.size()
              << " ks_mp1=" << frp::stats::ks_distance(res.values, frp::stats::mp1_cdf) << '\n';
  }
}

// ------------------------------------------------------------- orbital-stats

struct OrbitalArgs {
  Common common;
  std::vector<std::size_t> dims{32, 64, 128, 256};
  std::size_t trials = 200;
  std::size_t gram_d = 256;
  std::size_t independence_d = 64;
  std::size_t independence_trials = 1000;
  std::string out = "orbital.csv";
};

void run_orbital(const OrbitalArgs& a) {
  if (a.trials < 200) throw ValidationError("orbital statistics need at least 200 trials");
  ensure_parent(a.out);
  frp::CsvWriter csv(a.out, {"quantity", "d", "value"});
  auto emit = [&](const std::string& q, std::size_t d, double v) {
    csv.cell(q).cell(d).cell(v);
    csv.end_row();
    std::cout << q << " d=" << d << " value=" << v << '\n';
  };
  const std::vector<frp::ReducedWord> words{frp::ReducedWord::identity(), {frp::gen(1)}, {frp::gen(2)},
                                            {frp::gen(1), frp::gen(2)}};
  const auto conc = frp::orbital::gram_concentration(a.gram_d, words, a.trials,
                                                     frp::derive_seed(a.common.seed, 1), a.common.threads);
  emit("gram_mean_off_diagonal", a.gram_d, conc.mean_off_diagonal);
  emit("gram_max_diagonal_error", a.gram_d, conc.max_abs_diagonal_error);
  for (auto stat : {frp::orbital::PairStatistic::gram_entry, frp::orbital::PairStatistic::normalized_trace}) {
    frp::orbital::VarianceConfig cfg;
    cfg.dims = a.dims;
    cfg.trials = a.trials;
    cfg.statistic = stat;
    cfg.root_seed = frp::derive_seed(a.common.seed, 2);
    cfg.threads = a.common.threads;
    const std::string name = stat == frp::orbital::PairStatistic::gram_entry ? "gram_entry" : "normalized_trace";
    for (const auto& pt : frp::orbital::gram_variance_scaling(cfg)) emit("variance_" + name, pt.d, pt.variance);
  }
  const auto sweep = frp::orbital::independence_sweep(a.independence_d, 2, 2, a.independence_trials,
                                                      frp::derive_seed(a.common.seed, 3), a.common.threads);
  emit("dependent_count", a.independence_d, static_cast<double>(sweep.dependent));
  emit("smallest_sigma_min", a.independence_d, sweep.smallest_sigma);
}

// -------------------------------------------------------------------- cayley

struct CayleyArgs {
  Common common;  // accepted for a uniform interface; the drawing is not random
  std::size_t depth = 3;
  std::string out = "disk.svg";
  std::string csv;
};

void run_cayley(const CayleyArgs& a) {
  if (a.depth == 0 || a.depth > 12) throw ValidationError("depth must lie in [1, 12]");
  const auto arcs = frp::orbital::cayley_disk_arcs(a.depth);
  write_text(a.out, frp::svg::disk(arcs));
  if (!a.csv.empty()) {
    ensure_parent(a.csv);
    frp::CsvWriter csv(a.csv, {"level", "index", "cx", "cy", "r", "x1", "y1", "x2", "y2"});
    for (const auto& arc : arcs) {
      csv.cell(arc.level).cell(arc.index).cell(arc.cx).cell(arc.cy).cell(arc.r).cell(arc.x1).cell(arc.y1)
          .cell(arc.x2).cell(arc.y2);
      csv.end_row();
    }
  }
  std::size_t level = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i <= arcs.size(); ++i) {
    if (i == arcs.size() || arcs[i].level != level) {
      if (level > 0) std::cout << "level=" << level << " arcs=" << count << '\n';
      if (i == arcs.size()) break;
      level = arcs[i].level;
      count = 0;
    }
    ++count;
  }
}

// ------------------------------------------------------------------ frp-demo

struct DemoArgs {
  Common common;
  std::uint32_t n = 16;
  std::uint32_t ell = 1;
  std::size_t d = 128;
  std::size_t d_in = 128;
  double scale = 1.4142135623730951;
  std::size_t n_envs = 64;
  std::size_t phases = 2;
  std::size_t steps = 256;
  std::size_t chain_length = 9;
  std::string env = "chain";
  std::string out = "trajectory.csv";
};

void run_demo(const DemoArgs& a) {
  if (a.env != "chain" && a.env != "echo") throw ValidationError("env must be chain or echo");
  if (a.n == 0 || a.ell == 0 || a.n_envs == 0 || a.d == 0 || a.d_in == 0) {
    throw ValidationError("n, ell, d, d-in and n-envs must be positive");
  }
  if (!(a.scale > 0.0)) throw ValidationError("scale must be positive");
  const std::size_t obs_dim = a.env == "chain" ? a.chain_length : 8;
  if (obs_dim > a.d) throw ValidationError("environment observation dimension exceeds d");
  frp::env::SessionConfig cfg;
  cfg.n = a.n;
  cfg.ell = a.ell;
  cfg.d = a.d;
  cfg.d_in = a.d_in;
  cfg.scale = a.scale;
  cfg.n_envs = a.n_envs;
  cfg.seed = a.common.seed;
  cfg.model_action_dim = a.env == "chain" ? 1 : obs_dim;
  auto sampler = a.env == "chain" ? frp::env::chain_sampler(a.chain_length, 0.2) : frp::env::echo_sampler(obs_dim, 16);
  frp::env::FrpSession session(cfg, sampler);
  frp::Rng policy = frp::make_rng(a.common.seed, 99);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> returns;
  for (std::size_t phase = 0; phase < a.phases; ++phase) {
    if (phase > 0) session.resample_representation();
    std::vector<bool> done(a.n_envs, true);
    double reward_sum = 0.0;
    std::size_t episodes = 0;
    for (std::size_t t = 0; t < a.steps; ++t) {
      for (std::size_t slot = 0; slot < a.n_envs; ++slot) {
        Eigen::VectorXd action(static_cast<Eigen::Index>(cfg.model_action_dim));
        for (Eigen::Index i = 0; i < action.size(); ++i) action[i] = normal(policy);
        const auto out = session.step_environment(slot, action, done[slot]);
        reward_sum += out.reward;
        if (out.done) ++episodes;
        done[slot] = out.done;
      }
    }
    std::cout << "phase=" << phase << " episodes=" << episodes << " reward=" << reward_sum << '\n';
  }
  ensure_parent(a.out);
  frp::env::write_trajectory_csv(a.out, session.log());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free random projection laboratory"};
  app.require_subcommand(1);

  LsmdpArgs lsmdp;
  auto* s_lsmdp = app.add_subcommand("lsmdp-meta", "Meta-LSMDP aggregation over word families");
  add_common(s_lsmdp, lsmdp.common);
  s_lsmdp->add_option("--topology", lsmdp.topology, "lattice, tree or both")->capture_default_str();
  s_lsmdp->add_option("--seeds", lsmdp.seeds, "Number of experiment seeds")->capture_default_str();
  s_lsmdp->add_option("--nw", lsmdp.nw, "Word budget n_w")->capture_default_str();
  s_lsmdp->add_option("--ell", lsmdp.ells, "Word lengths")->delimiter(',')->capture_default_str();
  s_lsmdp->add_option("--gamma", lsmdp.gamma, "Discount gamma")->capture_default_str();
  s_lsmdp->add_option("--alpha", lsmdp.alpha, "KL cost weight alpha")->capture_default_str();
  s_lsmdp->add_option("--out", lsmdp.out, "Output CSV")->capture_default_str();

  EffdimArgs effdim;
  auto* s_effdim = app.add_subcommand("effdim", "Empirical vs theoretical effective dimension");
  add_common(s_effdim, effdim.common);
  s_effdim->add_option("--d", effdim.d)->capture_default_str()->check(CLI::PositiveNumber);
  s_effdim->add_option("--p", effdim.p)->capture_default_str()->check(CLI::PositiveNumber);
  s_effdim->add_option("--nw", effdim.nw)->capture_default_str()->check(CLI::PositiveNumber);
  s_effdim->add_option("--ell", effdim.ells)->delimiter(',')->capture_default_str();
  s_effdim->add_option("--trials", effdim.trials)->capture_default_str()->check(CLI::PositiveNumber);
  s_effdim->add_option("--gamma-min", effdim.gamma_min)->capture_default_str();
  s_effdim->add_option("--gamma-max", effdim.gamma_max)->capture_default_str();
  s_effdim->add_option("--gamma-count", effdim.gamma_count)->capture_default_str()->check(CLI::PositiveNumber);
  s_effdim->add_option("--out", effdim.out)->capture_default_str();

  EsdArgs esd;
  auto* s_esd = app.add_subcommand("esd", "Singular values of normalised word sums");
  add_common(s_esd, esd.common);
  s_esd->add_option("--d", esd.d)->capture_default_str()->check(CLI::PositiveNumber);
  s_esd->add_option("--nw", esd.nw)->capture_default_str()->check(CLI::PositiveNumber);
  s_esd->add_option("--ell", esd.ells)->delimiter(',')->capture_default_str();
  s_esd->add_option("--trials", esd.trials)->capture_default_str()->check(CLI::PositiveNumber);
  s_esd->add_option("--bins", esd.bins)->capture_default_str()->check(CLI::PositiveNumber);
  s_esd->add_option("--kind", esd.kind, "orthogonal or permutation")->capture_default_str();
  s_esd->add_option("--out-dir", esd.out_dir)->capture_default_str();
  s_esd->add_flag("--svg", esd.svg, "Also write SVG histograms");

  BlockArgs block;
  auto* s_block = app.add_subcommand("block-spectrum", "Eigenvalues of block word kernels");
  add_common(s_block, block.common);
  s_block->add_option("--d", block.d)->capture_default_str()->check(CLI::PositiveNumber);
  s_block->add_option("--k", block.k)->capture_default_str();
  s_block->add_option("--ell", block.ells)->delimiter(',')->capture_default_str();
  s_block->add_option("--trials", block.trials)->capture_default_str()->check(CLI::PositiveNumber);
  s_block->add_option("--bins", block.bins)->capture_default_str()->check(CLI::PositiveNumber);
  s_block->add_option("--kind", block.kind, "orthogonal or permutation")->capture_default_str();
  s_block->add_option("--arrangement", block.arrangement, "partial-transpose, raw or shuffled")->capture_default_str();
  s_block->add_option("--out-dir", block.out_dir)->capture_default_str();
  s_block->add_flag("--svg", block.svg, "Also write SVG histograms");

  OrbitalArgs orbital;
  auto* s_orbital = app.add_subcommand("orbital-stats", "Orbit Gram concentration and independence");
  add_common(s_orbital, orbital.common);
  s_orbital->add_option("--dims", orbital.dims)->delimiter(',')->capture_default_str();
  s_orbital->add_option("--trials", orbital.trials)->capture_default_str();
  s_orbital->add_option("--gram-d", orbital.gram_d)->capture_default_str()->check(CLI::PositiveNumber);
  s_orbital->add_option("--independence-d", orbital.independence_d)->capture_default_str()->check(CLI::PositiveNumber);
  s_orbital->add_option("--independence-trials", orbital.independence_trials)->capture_default_str();
  s_orbital->add_option("--out", orbital.out)->capture_default_str();

  CayleyArgs cayley;
  auto* s_cayley = app.add_subcommand("cayley", "Poincare-disk drawing of the Cayley tree of F_2");
  add_common(s_cayley, cayley.common);
  s_cayley->add_option("--depth", cayley.depth)->capture_default_str();
  s_cayley->add_option("--out", cayley.out, "SVG output")->capture_default_str();
  s_cayley->add_option("--csv", cayley.csv, "Optional arc CSV");

  DemoArgs demo;
  auto* s_demo = app.add_subcommand("frp-demo", "Environment steps with free random projection");
  add_common(s_demo, demo.common);
  s_demo->add_option("--n", demo.n)->capture_default_str();
  s_demo->add_option("--ell", demo.ell)->capture_default_str();
  s_demo->add_option("--d", demo.d)->capture_default_str();
  s_demo->add_option("--d-in", demo.d_in)->capture_default_str();
  s_demo->add_option("--scale", demo.scale)->capture_default_str();
  s_demo->add_option("--n-envs", demo.n_envs)->capture_default_str();
  s_demo->add_option("--phases", demo.phases)->capture_default_str();
  s_demo->add_option("--steps", demo.steps)->capture_default_str();
  s_demo->add_option("--env", demo.env, "chain or echo")->capture_default_str();
  s_demo->add_option("--out", demo.out)->capture_default_str();

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  // CLI11 consumes the vector from the back
  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (s_lsmdp->parsed()) run_lsmdp(lsmdp);
    if (s_effdim->parsed()) run_effdim(effdim);
    if (s_esd->parsed()) run_esd(esd);
    if (s_block->parsed()) run_block(block);
    if (s_orbital->parsed()) run_orbital(orbital);
    if (s_cayley->parsed()) run_cayley(cayley);
    if (s_demo->parsed()) run_demo(demo);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
