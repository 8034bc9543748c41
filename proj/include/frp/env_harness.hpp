#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "frp/config.hpp"
#include "frp/free_group.hpp"
#include "frp/matrix_rep.hpp"
#include "frp/random.hpp"

namespace frp::env {

struct StepResult {
  Eigen::VectorXd observation;
  double reward = 0.0;
  bool done = false;
};

/// Minimal episodic environment. Observations always have obs_dim() entries.
class ToyEnvironment {
 public:
  virtual ~ToyEnvironment() = default;
  virtual std::size_t obs_dim() const = 0;
  virtual std::size_t action_dim() const = 0;
  virtual Eigen::VectorXd reset(Rng& rng) = 0;
  virtual StepResult step(const Eigen::VectorXd& action) = 0;
};

/// Draws a fresh environment instance (the environment distribution).
using EnvironmentSampler = std::function<std::unique_ptr<ToyEnvironment>(Rng&)>;

/// Observation is the one-hot of the last action's argmax; reward 1 when that
/// argmax hits a hidden target drawn at reset. Ends after `episode_length`.
class EchoEnvironment final : public ToyEnvironment {
 public:
  EchoEnvironment(std::size_t dim, std::size_t episode_length);

  std::size_t obs_dim() const override { return dim_; }
  std::size_t action_dim() const override { return dim_; }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  std::size_t target() const noexcept { return target_; }

 private:
  std::size_t dim_;
  std::size_t episode_length_;
  std::size_t target_ = 0;
  std::size_t t_ = 0;
};

/// Chain of `length` states starting in the middle. The sign of action[0]
/// picks a direction, reversed with probability `slip`. Reaching the right
/// end pays 1, the left end pays 0; both terminate.
class RandomWalkChain final : public ToyEnvironment {
 public:
  RandomWalkChain(std::size_t length, double slip);

  std::size_t obs_dim() const override { return length_; }
  std::size_t action_dim() const override { return 1; }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  std::size_t position() const noexcept { return position_; }

 private:
  Eigen::VectorXd observe() const;

  std::size_t length_;
  double slip_;
  std::size_t position_ = 0;
  Rng rng_;
};

EnvironmentSampler echo_sampler(std::size_t dim, std::size_t episode_length);
/// Slip probability drawn uniformly from [0, max_slip] per instance.
EnvironmentSampler chain_sampler(std::size_t length, double max_slip);

enum class ActionProjection { haar, identity };

struct SessionConfig {
  std::uint32_t n = 16;
  std::uint32_t ell = 1;
  std::size_t d = 128;
  std::size_t d_in = 128;
  std::size_t model_action_dim = 1;
  double scale = 1.4142135623730951;
  std::size_t n_envs = 64;
  std::uint64_t seed = 0;
  std::size_t horizon = 1024;
  MatrixKind kind = MatrixKind::orthogonal;
  ActionProjection action_projection = ActionProjection::haar;
  bool record_observations = false;

  /// Keys n, ell, d, d_in, scale, n_envs, seed override the defaults.
  static SessionConfig from(const KeyValueConfig& cfg, SessionConfig defaults);
  static SessionConfig from(const KeyValueConfig& cfg);
};

struct TrajectoryRecord {
  std::size_t phase;
  std::size_t env_slot;
  std::size_t episode;
  std::size_t t;
  std::size_t word_id;
  double reward;
  bool done;
  Eigen::VectorXd raw_observation;        // only with record_observations
  Eigen::VectorXd projected_observation;  // only with record_observations
};

/// Meta-RL environment step with free random projection. Each slot keeps
/// one word for a whole episode and draws a fresh one at every reset; the
/// generators U_i stay fixed until resample_representation().
class FrpSession {
 public:
  FrpSession(SessionConfig cfg, EnvironmentSampler sampler);
  /// Starts from a caller-supplied representation instead of a sampled one.
  FrpSession(SessionConfig cfg, EnvironmentSampler sampler, Representation rep);

  struct Output {
    Eigen::VectorXd observation;
    double reward;
    bool done;
  };

  /// With done_in, resets the slot (new environment, word, M_o and M_a) and
  /// returns the projected initial observation with reward 0 and done 0.
  /// Otherwise applies M_a to the action, steps, and projects with M_o.
  /// Throws std::invalid_argument on bad slot or action length and
  /// std::logic_error when a slot that needs a reset is stepped.
  Output step_environment(std::size_t slot, const Eigen::VectorXd& action, bool done_in);

  /// New generators for the next collection phase; every slot must then be
  /// reset (done_in = true) before it can step again.
  void resample_representation(Rng& rng);
  void resample_representation();

  const SessionConfig& config() const noexcept { return cfg_; }
  const Representation& representation() const noexcept { return rep_; }
  const WordFamily& family() const noexcept { return family_; }
  std::size_t phase() const noexcept { return phase_; }
  std::size_t slot_count() const noexcept { return slots_.size(); }
  /// Current word of a slot, if it has been reset in this phase.
  std::optional<std::size_t> current_word(std::size_t slot) const;
  const FrpOperator* observation_operator(std::size_t slot) const;
  const std::vector<TrajectoryRecord>& log() const noexcept { return log_; }

 private:
  struct Slot {
    Rng rng;
    std::unique_ptr<ToyEnvironment> env;
    std::optional<FrpOperator> m_o;
    Eigen::MatrixXd m_a;
    std::size_t word_id = 0;
    std::size_t episode = 0;
    std::size_t t = 0;
    bool active = false;
  };

  void validate() const;
  void record(std::size_t slot, const Eigen::VectorXd& raw, const Eigen::VectorXd& projected, double reward,
              bool done);

  SessionConfig cfg_;
  EnvironmentSampler sampler_;
  WordFamily family_;
  Rng rng_;
  Representation rep_;
  std::vector<Slot> slots_;
  std::size_t phase_ = 0;
  std::vector<TrajectoryRecord> log_;
};

/// Columns phase, env_slot, episode, t, word_id, reward, done.
void write_trajectory_csv(const std::filesystem::path& path, const std::vector<TrajectoryRecord>& log);

}  // namespace frp::env
