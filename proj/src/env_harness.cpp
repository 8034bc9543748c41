#include "frp/env_harness.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "frp/csv.hpp"

namespace frp::env {

EchoEnvironment::EchoEnvironment(std::size_t dim, std::size_t episode_length)
    : dim_(dim), episode_length_(episode_length) {
  if (dim_ == 0 || episode_length_ == 0) throw std::invalid_argument("echo environment needs positive sizes");
}

Eigen::VectorXd EchoEnvironment::reset(Rng& rng) {
  target_ = std::uniform_int_distribution<std::size_t>(0, dim_ - 1)(rng);
  t_ = 0;
  return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
}

StepResult EchoEnvironment::step(const Eigen::VectorXd& action) {
  if (static_cast<std::size_t>(action.size()) != dim_) throw std::invalid_argument("echo action length mismatch");
  Eigen::Index arg = 0;
  action.maxCoeff(&arg);
  StepResult out;
  out.observation = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
  out.observation[arg] = 1.0;
  out.reward = static_cast<std::size_t>(arg) == target_ ? 1.0 : 0.0;
  out.done = ++t_ >= episode_length_;
  return out;
}

RandomWalkChain::RandomWalkChain(std::size_t length, double slip) : length_(length), slip_(slip) {
  if (length_ < 3) throw std::invalid_argument("chain needs at least three states");
  if (!(slip_ >= 0.0 && slip_ <= 1.0)) throw std::invalid_argument("slip must lie in [0,1]");
}

Eigen::VectorXd RandomWalkChain::observe() const {
  Eigen::VectorXd obs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(length_));
  obs[static_cast<Eigen::Index>(position_)] = 1.0;
  return obs;
}

Eigen::VectorXd RandomWalkChain::reset(Rng& rng) {
  rng_.seed(rng());
  position_ = length_ / 2;
  return observe();
}

StepResult RandomWalkChain::step(const Eigen::VectorXd& action) {
  if (action.size() != 1) throw std::invalid_argument("chain action has one entry");
  bool right = action[0] >= 0.0;
  if (std::bernoulli_distribution(slip_)(rng_)) right = !right;
  position_ = right ? position_ + 1 : position_ - 1;
  StepResult out;
  out.observation = observe();
  out.done = position_ == 0 || position_ + 1 == length_;
  out.reward = position_ + 1 == length_ ? 1.0 : 0.0;
  return out;
}

EnvironmentSampler echo_sampler(std::size_t dim, std::size_t episode_length) {
  return [=](Rng&) { return std::make_unique<EchoEnvironment>(dim, episode_length); };
}

EnvironmentSampler chain_sampler(std::size_t length, double max_slip) {
  return [=](Rng& rng) {
    const double slip = std::uniform_real_distribution<double>(0.0, max_slip)(rng);
    return std::make_unique<RandomWalkChain>(length, slip);
  };
}

SessionConfig SessionConfig::from(const KeyValueConfig& cfg, SessionConfig defaults) {
  auto positive = [&](const char* key, long long fallback) {
    const auto v = cfg.get_int(key, fallback);
    if (v <= 0) throw std::invalid_argument(std::string("config key ") + key + " must be positive");
    return v;
  };
  SessionConfig out = defaults;
  out.n = static_cast<std::uint32_t>(positive("n", defaults.n));
  out.ell = static_cast<std::uint32_t>(positive("ell", defaults.ell));
  out.d = static_cast<std::size_t>(positive("d", static_cast<long long>(defaults.d)));
  out.d_in = static_cast<std::size_t>(positive("d_in", static_cast<long long>(defaults.d_in)));
  out.n_envs = static_cast<std::size_t>(positive("n_envs", static_cast<long long>(defaults.n_envs)));
  out.scale = cfg.get_double("scale", defaults.scale);
  out.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long long>(defaults.seed)));
  return out;
}

SessionConfig SessionConfig::from(const KeyValueConfig& cfg) { return from(cfg, SessionConfig{}); }

FrpSession::FrpSession(SessionConfig cfg, EnvironmentSampler sampler)
    : FrpSession(cfg, std::move(sampler), [&] {
        Rng rng = make_rng(cfg.seed, 0);
        return Representation::sample(cfg.kind, cfg.n, cfg.d, rng);
      }()) {}

FrpSession::FrpSession(SessionConfig cfg, EnvironmentSampler sampler, Representation rep)
    : cfg_(cfg), sampler_(std::move(sampler)), family_(cfg.n, cfg.ell), rng_(make_rng(cfg.seed, 1)),
      rep_(std::move(rep)) {
  validate();
  slots_.resize(cfg_.n_envs);
  for (std::size_t i = 0; i < slots_.size(); ++i) slots_[i].rng = make_rng(derive_seed(cfg_.seed, 2), i);
}

void FrpSession::validate() const {
  if (!sampler_) throw std::invalid_argument("session needs an environment sampler");
  if (cfg_.n_envs == 0) throw std::invalid_argument("session needs at least one environment");
  if (cfg_.horizon == 0) throw std::invalid_argument("horizon must be positive");
  if (cfg_.model_action_dim == 0) throw std::invalid_argument("model action dimension must be positive");
  if (rep_.dim() != cfg_.d) throw std::invalid_argument("representation dimension differs from d");
  if (rep_.generator_count() < cfg_.n) throw std::invalid_argument("representation has too few generators");
}

std::optional<std::size_t> FrpSession::current_word(std::size_t slot) const {
  if (slot >= slots_.size() || !slots_[slot].active) return std::nullopt;
  return slots_[slot].word_id;
}

const FrpOperator* FrpSession::observation_operator(std::size_t slot) const {
  if (slot >= slots_.size() || !slots_[slot].m_o) return nullptr;
  return &*slots_[slot].m_o;
}

void FrpSession::record(std::size_t slot, const Eigen::VectorXd& raw, const Eigen::VectorXd& projected,
                        double reward, bool done) {
  const Slot& s = slots_[slot];
  TrajectoryRecord r{phase_, slot, s.episode, s.t, s.word_id, reward, done, {}, {}};
  if (cfg_.record_observations) {
    r.raw_observation = raw;
    r.projected_observation = projected;
  }
  log_.push_back(std::move(r));
}

FrpSession::Output FrpSession::step_environment(std::size_t slot, const Eigen::VectorXd& action, bool done_in) {
  if (slot >= slots_.size()) throw std::invalid_argument("environment slot out of range");
  if (static_cast<std::size_t>(action.size()) != cfg_.model_action_dim) {
    throw std::invalid_argument("action length " + std::to_string(action.size()) + " != model action dim " +
                                std::to_string(cfg_.model_action_dim));
  }
  Slot& s = slots_[slot];
  if (done_in) {
    s.env = sampler_(s.rng);
    if (!s.env) throw std::runtime_error("environment sampler returned null");
    s.word_id = sample_word_index(family_.size(), s.rng);
    s.m_o.emplace(rep_, family_[s.word_id], s.env->obs_dim(), cfg_.d_in, cfg_.scale);
    const auto env_actions = static_cast<Eigen::Index>(s.env->action_dim());
    const auto model_actions = static_cast<Eigen::Index>(cfg_.model_action_dim);
    if (cfg_.action_projection == ActionProjection::identity) {
      s.m_a = Eigen::MatrixXd::Identity(env_actions, model_actions);
    } else {
      const auto big = std::max(env_actions, model_actions);
      s.m_a = sample_haar_orthogonal(static_cast<std::size_t>(big), s.rng)
                  .matrix()
                  .topLeftCorner(env_actions, model_actions);
    }
    const Eigen::VectorXd raw = s.env->reset(s.rng);
    ++s.episode;
    s.t = 0;
    s.active = true;
    Output out{s.m_o->project(raw), 0.0, false};
    record(slot, raw, out.observation, out.reward, out.done);
    return out;
  }
  if (!s.active) throw std::logic_error("slot " + std::to_string(slot) + " must be reset before stepping");
  StepResult res = s.env->step(s.m_a * action);
  if (static_cast<std::size_t>(res.observation.size()) != s.env->obs_dim()) {
    throw std::runtime_error("environment returned an observation of the wrong length");
  }
  ++s.t;
  if (s.t >= cfg_.horizon) res.done = true;
  Output out{s.m_o->project(res.observation), res.reward, res.done};
  record(slot, res.observation, out.observation, out.reward, out.done);
  if (res.done) s.active = false;
  return out;
}

void FrpSession::resample_representation(Rng& rng) {
  rep_ = Representation::sample(cfg_.kind, cfg_.n, cfg_.d, rng);
  ++phase_;
  for (auto& s : slots_) {
    s.active = false;
    s.m_o.reset();
  }
}

void FrpSession::resample_representation() { resample_representation(rng_); }

void write_trajectory_csv(const std::filesystem::path& path, const std::vector<TrajectoryRecord>& log) {
  CsvWriter w(path, {"phase", "env_slot", "episode", "t", "word_id", "reward", "done"});
  for (const auto& r : log) {
    w.cell(r.phase).cell(r.env_slot).cell(r.episode).cell(r.t).cell(r.word_id).cell(r.reward).cell(r.done ? 1 : 0);
    w.end_row();
  }
}

}  // namespace frp::env
