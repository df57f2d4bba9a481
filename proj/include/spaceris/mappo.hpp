#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "spaceris/channel.hpp"
#include "spaceris/learnkit.hpp"
#include "spaceris/netsim.hpp"
#include "spaceris/rng.hpp"

namespace spaceris::mappo {

using learnkit::Vec;

struct PpoHyper {
  double gamma = 0.95;        // Table-I discount
  double gae_lambda = 0.95;
  double clip_eps = 0.2;
  int epochs = 3;             // Table-I epoch
  int minibatch = 16;         // Table-I batch size
  int iters_per_update = 16;  // buffer = minibatch * iters_per_update
  double lr = 3e-4;           // Table-I learning rate
  double entropy_coef = 0.01;
  double init_log_std = -0.7;

  int buffer_size() const { return minibatch * iters_per_update; }
};

// --- Observation / reward builders (the two MDPs) ---------------------------

/// Routing observation: per packet slot (node plane, node index, destination
/// plane, destination index, active), grid coordinates normalized to [0,1],
/// zero-padded to p_max slots. Destination coordinates are the grid position
/// of the RUE's serving satellite (association), falling back to the
/// highest-elevation satellite.
Vec routing_observe(const netsim::NetEnv& env, int p_max);

/// Mean over active packets of 1/(remaining/d_scale + eps_r); a delivery
/// contributes the cap 1/eps_r on its slot. Empty input yields 0.
double routing_reward(const std::vector<double>& remaining_m, const std::vector<bool>& delivered,
                      double d_scale_m = 1e6, double eps_r = 1e-3);

/// Phase-shift observation: (L_tot dB / 300, previous-slot SNR dB / 60,
/// per-hop distances / 1e7 m). Fixed documented scaling.
Vec ps_observe(const channel::LinkBudget& budget, double gamma_prev);

/// Squared cascade magnitude normalized by its coherent upper bound, in (0,1].
double ps_reward(const channel::CascadeChannel& cascade,
                 const std::vector<channel::RisPanel>& panels, int beam_column = 0);

/// Map raw Gaussian samples into [0, 2*pi): pi * (tanh(raw) + 1).
Vec squash_to_phases(const Vec& raw);

// --- GAE ---------------------------------------------------------------------

struct GaeOut {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// delta_t = r_t + gamma*V(s_{t+1})*(1-done_t) - V(s_t);
/// A_t = delta_t + gamma*lambda*(1-done_t)*A_{t+1}; returns = A + V.
GaeOut gae(const std::vector<double>& rewards, const std::vector<double>& values,
           const std::vector<bool>& dones, double bootstrap_value, double gamma, double lambda);

// --- Agents ------------------------------------------------------------------

enum class AgentKind { Routing, PhaseShift, Central };

struct AgentConfig {
  AgentKind kind = AgentKind::Routing;
  int obs_dim = 0;
  int global_obs_dim = 0;
  int p_max = 0;   // categorical packet slots (5 actions each)
  int ps_dim = 0;  // Gaussian phase dims
  std::vector<int> actor_hidden = {128, 128};  // Table-I actor network
  std::vector<int> critic_hidden = {16, 16};   // Table-I critic network
  double lr = 3e-4;
  double init_log_std = -0.7;

  int actor_out_dim() const { return p_max * netsim::kNumActions + ps_dim; }
};

/// Actor-critic pair under CTDE: the actor sees the local observation, the
/// critic sees the concatenated global observation of all agents.
struct Agent {
  AgentConfig cfg;
  learnkit::Mlp actor;
  learnkit::Mlp critic;
  Vec log_std;  // state-independent, learnable (empty when ps_dim == 0)
  learnkit::AdamState opt_actor;
  learnkit::AdamState opt_critic;
  learnkit::AdamVec opt_log_std;

  static Agent create(const AgentConfig& cfg, Rng& rng);
  double value(const Vec& global_obs) const;
};

void save_agent(std::ostream& os, const Agent& agent);
void load_agent_params(std::istream& is, Agent& agent);  // into an existing shape

using ActionMask = std::array<bool, netsim::kNumActions>;

struct ActionSample {
  std::vector<int> cat;  // size p_max; -1 marks an inactive slot
  Vec gauss_raw;         // size ps_dim (pre-squash)
  double logprob = 0.0;  // joint over all active heads
};

/// Sample (or take greedy/mean when deterministic) actions from the actor.
/// Slots whose mask is all-false are inactive.
ActionSample act(const Agent& agent, const Vec& obs, const std::vector<ActionMask>& masks,
                 Rng& rng, bool deterministic = false);

// --- Rollouts & updates --------------------------------------------------------

struct Transition {
  Vec obs;
  Vec global_obs;
  std::vector<int> cat;
  std::vector<ActionMask> masks;
  Vec gauss_raw;
  double logprob = 0.0;
  double reward = 0.0;
  double value = 0.0;
  bool done = false;
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  bool aborted = false;  // non-finite loss; parameters restored
};

/// Clipped-surrogate PPO update (epochs x minibatches over the buffer),
/// advantages normalized per buffer, entropy bonus added. On a non-finite
/// loss the pre-update parameters are restored.
UpdateStats ppo_update(Agent& agent, std::vector<Transition>& buffer, double bootstrap_value,
                       const PpoHyper& hyper, Rng& rng);

/// Critic-only regression of values onto GAE returns (Eq. 26/27 path);
/// exposed separately for tests.
double value_update(Agent& agent, const std::vector<Vec>& global_obs,
                    const std::vector<double>& returns, int epochs, int minibatch, Rng& rng);

// --- Environment interface -----------------------------------------------------

/// A two-surface environment: routing actions (masked categorical per packet
/// slot) and phase actions (vector in [0, 2*pi)). Either surface may be
/// inactive (dimension 0).
class Env {
 public:
  virtual ~Env() = default;
  virtual void reset(Rng& rng) = 0;
  virtual bool done() const = 0;
  virtual Vec ro_obs() const = 0;
  virtual Vec ps_obs() const = 0;
  virtual std::vector<ActionMask> ro_masks() const = 0;
  virtual int p_max() const = 0;
  virtual int ps_dim() const = 0;

  struct StepRewards {
    double ro = 0.0;
    double ps = 0.0;
  };
  virtual StepRewards step(const std::vector<int>& ro_actions, const Vec& phases, Rng& rng) = 0;
};

struct CurvePoint {
  long iter = 0;  // environment steps consumed so far
  std::string agent;
  double reward_mean = 0.0;
  double reward_std = 0.0;
  double value_loss = 0.0;
  double policy_loss = 0.0;
};

struct TrainConfig {
  PpoHyper hyper;
  long total_steps = 50000;
  bool central = false;
  /// Called after every update with steps consumed; returning true stops
  /// training early (used for target-metric stopping).
  std::function<bool(long)> stop_early;
};

struct TrainResult {
  std::vector<CurvePoint> curve;
  bool aborted = false;
  long steps = 0;
};

/// Algorithm-2 loop under CTDE. `agents` holds either {routing, phase} (both
/// optional by the env's surface dims) or a single central agent.
TrainResult train(Env& env, std::vector<Agent>& agents, const TrainConfig& cfg, Rng& rng);

// --- Concrete desk environments ------------------------------------------------

/// Routing-only world: `packets_per_episode` packets with rng-chosen
/// destinations spawn at reset; episode ends on delivery/drop of all packets
/// or after `horizon` slots.
class RoutingGridEnv : public Env {
 public:
  RoutingGridEnv(netsim::NetEnv net, int p_max_slots, int horizon, int packets_per_episode = 1);

  void reset(Rng& rng) override;
  bool done() const override;
  Vec ro_obs() const override;
  Vec ps_obs() const override { return Vec(); }
  std::vector<ActionMask> ro_masks() const override;
  int p_max() const override { return p_max_; }
  int ps_dim() const override { return 0; }
  StepRewards step(const std::vector<int>& ro_actions, const Vec& phases, Rng& rng) override;

  netsim::NetEnv& net() { return net_; }
  int episode_env_steps() const { return steps_; }

 private:
  netsim::NetEnv net_;
  int p_max_;
  int horizon_;
  int packets_per_episode_;
  int steps_ = 0;
};

/// Phase-alignment world over one fixed cascade realization. Reward is the
/// coherent-bound-normalized cascade gain; the observation carries the link
/// budget and the previous slot's SNR.
class PhaseAlignEnv : public Env {
 public:
  PhaseAlignEnv(channel::CascadeChannel cascade, channel::RisPanel proto,
                channel::LinkBudget budget, double power_w, int horizon = 16);

  void reset(Rng& rng) override;
  bool done() const override { return steps_ >= horizon_; }
  Vec ro_obs() const override { return Vec(); }
  Vec ps_obs() const override;
  std::vector<ActionMask> ro_masks() const override { return {}; }
  int p_max() const override { return 0; }
  int ps_dim() const override { return proto_.num_elements; }
  StepRewards step(const std::vector<int>& ro_actions, const Vec& phases, Rng& rng) override;

  double last_reward() const { return last_reward_; }
  const channel::CascadeChannel& cascade() const { return cascade_; }
  const channel::RisPanel& proto() const { return proto_; }

 private:
  channel::CascadeChannel cascade_;
  channel::RisPanel proto_;
  channel::LinkBudget budget_;
  double power_w_;
  int horizon_;
  int steps_ = 0;
  double gamma_prev_ = 0.0;
  double last_reward_ = 0.0;
};

}  // namespace spaceris::mappo
