#include "spaceris/mappo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spaceris::mappo {

namespace {
constexpr double kMaskedLogit = -1e30;

Vec masked_logits(const Vec& logits, const ActionMask& mask) {
  Vec out = logits;
  for (int a = 0; a < netsim::kNumActions; ++a)
    if (!mask[a]) out(a) = kMaskedLogit;
  return out;
}

bool mask_active(const ActionMask& m) {
  for (bool b : m)
    if (b) return true;
  return false;
}
}  // namespace

Vec routing_observe(const netsim::NetEnv& env, int p_max) {
  const auto& con = env.constellation();
  const int planes = static_cast<int>(con.planes.size());
  const int per = con.sats_per_plane();
  const double pn = std::max(1, planes - 1);
  const double sn = std::max(1, per - 1);

  Vec obs = Vec::Zero(5 * p_max);
  const auto flying = env.in_flight();
  int slot = 0;
  for (const auto* p : flying) {
    if (slot >= p_max) break;
    obs(5 * slot + 0) = con.plane_of(p->sat) / pn;
    obs(5 * slot + 1) = con.index_of(p->sat) / sn;
    // Grid target: the destination's highest-elevation satellite this slot.
    int target = 0;
    double best = -M_PI;
    for (int s = 0; s < static_cast<int>(env.state().positions.size()); ++s) {
      const double e = geometry::elevation_angle(env.rue_positions()[p->dest_rue],
                                                 env.state().positions[s], con.consts);
      if (e > best) {
        best = e;
        target = s;
      }
    }
    obs(5 * slot + 2) = con.plane_of(target) / pn;
    obs(5 * slot + 3) = con.index_of(target) / sn;
    obs(5 * slot + 4) = 1.0;
    ++slot;
  }
  return obs;
}

double routing_reward(const std::vector<double>& remaining_m, const std::vector<bool>& delivered,
                      double d_scale_m, double eps_r) {
  if (remaining_m.size() != delivered.size())
    throw std::invalid_argument("routing_reward: size mismatch");
  if (remaining_m.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < remaining_m.size(); ++i) {
    if (delivered[i]) {
      sum += 1.0 / eps_r;  // delivery cap
    } else {
      if (remaining_m[i] < 0.0) throw std::invalid_argument("routing_reward: negative distance");
      sum += 1.0 / (remaining_m[i] / d_scale_m + eps_r);
    }
  }
  return sum / static_cast<double>(remaining_m.size());
}

Vec ps_observe(const channel::LinkBudget& budget, double gamma_prev) {
  Vec obs(5);
  obs(0) = budget.total_db / 300.0;
  const double g_db = gamma_prev > 1e-30 ? 10.0 * std::log10(gamma_prev) : -300.0;
  obs(1) = g_db / 60.0;
  obs(2) = budget.d_bs_m / 1e7;
  obs(3) = budget.d_ss_m / 1e7;
  obs(4) = budget.d_su_m / 1e7;
  return obs;
}

double ps_reward(const channel::CascadeChannel& cascade,
                 const std::vector<channel::RisPanel>& panels, int beam_column) {
  const Eigen::RowVectorXcd row = channel::cascade_row(cascade, panels);
  const std::complex<double> s = row * cascade.beamformer.col(beam_column);
  const double amp = panels.empty() ? 1.0 : panels.front().amplitude;
  const double bound = channel::coherent_amplitude_bound(cascade, amp, beam_column);
  if (bound <= 0.0) throw std::invalid_argument("ps_reward: degenerate cascade bound");
  return std::norm(s) / (bound * bound);
}

Vec squash_to_phases(const Vec& raw) {
  Vec out(raw.size());
  for (int i = 0; i < raw.size(); ++i) out(i) = M_PI * (std::tanh(raw(i)) + 1.0);
  return out;
}

GaeOut gae(const std::vector<double>& rewards, const std::vector<double>& values,
           const std::vector<bool>& dones, double bootstrap_value, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) throw std::invalid_argument("gae: size mismatch");
  GaeOut out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double next_adv = 0.0;
  double next_value = bootstrap_value;
  for (std::size_t i = n; i-- > 0;) {
    const double not_done = dones[i] ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * next_value * not_done - values[i];
    next_adv = delta + gamma * lambda * not_done * next_adv;
    out.advantages[i] = next_adv;
    out.returns[i] = next_adv + values[i];
    next_value = values[i];
  }
  return out;
}

Agent Agent::create(const AgentConfig& cfg, Rng& rng) {
  if (cfg.obs_dim < 1 || cfg.global_obs_dim < 1)
    throw std::invalid_argument("Agent: observation dims must be positive");
  if (cfg.actor_out_dim() < 1) throw std::invalid_argument("Agent: no action surface");
  Agent a;
  a.cfg = cfg;
  std::vector<int> actor_dims{cfg.obs_dim};
  for (int h : cfg.actor_hidden) actor_dims.push_back(h);
  actor_dims.push_back(cfg.actor_out_dim());
  std::vector<int> critic_dims{cfg.global_obs_dim};
  for (int h : cfg.critic_hidden) critic_dims.push_back(h);
  critic_dims.push_back(1);
  Rng actor_rng = rng.split(1);
  Rng critic_rng = rng.split(2);
  a.actor = learnkit::Mlp::create(actor_dims, actor_rng);
  a.critic = learnkit::Mlp::create(critic_dims, critic_rng);
  a.log_std = Vec::Constant(cfg.ps_dim, cfg.init_log_std);
  a.opt_actor = learnkit::AdamState::init(a.actor, cfg.lr);
  a.opt_critic = learnkit::AdamState::init(a.critic, cfg.lr);
  a.opt_log_std = learnkit::AdamVec::init(cfg.ps_dim, cfg.lr);
  return a;
}

double Agent::value(const Vec& global_obs) const { return critic.forward(global_obs)(0); }

void save_agent(std::ostream& os, const Agent& agent) {
  learnkit::save_mlp(os, agent.actor);
  learnkit::save_mlp(os, agent.critic);
  learnkit::save_vec(os, agent.log_std);
}

void load_agent_params(std::istream& is, Agent& agent) {
  learnkit::Mlp actor = learnkit::load_mlp(is);
  learnkit::Mlp critic = learnkit::load_mlp(is);
  Vec log_std = learnkit::load_vec(is);
  if (actor.dims != agent.actor.dims || critic.dims != agent.critic.dims ||
      log_std.size() != agent.log_std.size())
    throw std::runtime_error("load_agent_params: checkpoint shape mismatch");
  agent.actor = std::move(actor);
  agent.critic = std::move(critic);
  agent.log_std = std::move(log_std);
}

ActionSample act(const Agent& agent, const Vec& obs, const std::vector<ActionMask>& masks,
                 Rng& rng, bool deterministic) {
  if (static_cast<int>(masks.size()) != agent.cfg.p_max)
    throw std::invalid_argument("act: mask count != p_max");
  const Vec out = agent.actor.forward(obs);
  ActionSample s;
  s.cat.assign(agent.cfg.p_max, -1);
  s.logprob = 0.0;
  for (int i = 0; i < agent.cfg.p_max; ++i) {
    if (!mask_active(masks[i])) continue;
    const Vec logits = masked_logits(out.segment(i * netsim::kNumActions, netsim::kNumActions),
                                     masks[i]);
    if (deterministic) {
      int best = 0;
      logits.maxCoeff(&best);
      s.cat[i] = best;
      s.logprob += learnkit::categorical_logprob(logits, best);
    } else {
      double lp = 0.0;
      s.cat[i] = learnkit::sample_categorical(logits, rng, &lp);
      s.logprob += lp;
    }
  }
  if (agent.cfg.ps_dim > 0) {
    const Vec mean = out.tail(agent.cfg.ps_dim);
    if (deterministic) {
      s.gauss_raw = mean;
      s.logprob += learnkit::gaussian_logprob(mean, agent.log_std, mean);
    } else {
      double lp = 0.0;
      s.gauss_raw = learnkit::sample_gaussian(mean, agent.log_std, rng, &lp);
      s.logprob += lp;
    }
  } else {
    s.gauss_raw = Vec();
  }
  return s;
}

namespace {

struct SampleGrad {
  double logprob_new = 0.0;
  // d(logprob)/d(actor outputs) and entropy gradient pieces are assembled
  // directly into the output-gradient vector by the caller.
};

/// Recompute the joint log-probability and fill `g_out` (gradient of
/// `-coef_surr * logprob - entropy_coef * entropy` w.r.t. actor outputs) and
/// `g_log_std`. `coef_surr` is the active min-branch multiplier ratio*A.
double logprob_and_grad(const Agent& agent, const Vec& actor_out, const Transition& t,
                        double coef_surr, double entropy_coef, Vec& g_out, Vec& g_log_std,
                        double* entropy_out) {
  double lp = 0.0;
  double entropy = 0.0;
  g_out.setZero();
  for (int i = 0; i < agent.cfg.p_max; ++i) {
    if (t.cat[i] < 0) continue;
    const Vec logits =
        masked_logits(actor_out.segment(i * netsim::kNumActions, netsim::kNumActions), t.masks[i]);
    const Vec logp = learnkit::log_softmax(logits);
    lp += logp(t.cat[i]);
    double h = 0.0;
    for (int a = 0; a < netsim::kNumActions; ++a) {
      const double p = std::exp(logp(a));
      if (p > 0.0) h -= p * logp(a);
    }
    entropy += h;
    for (int a = 0; a < netsim::kNumActions; ++a) {
      const double p = std::exp(logp(a));
      const double onehot = (a == t.cat[i]) ? 1.0 : 0.0;
      double g = -coef_surr * (onehot - p);          // surrogate part
      g += entropy_coef * p * (logp(a) + h);          // entropy bonus part
      g_out(i * netsim::kNumActions + a) += g;
    }
  }
  if (agent.cfg.ps_dim > 0) {
    const Vec mean = actor_out.tail(agent.cfg.ps_dim);
    lp += learnkit::gaussian_logprob(mean, agent.log_std, t.gauss_raw);
    entropy += learnkit::gaussian_entropy(agent.log_std);
    for (int i = 0; i < agent.cfg.ps_dim; ++i) {
      const double sd = std::exp(agent.log_std(i));
      const double z = (t.gauss_raw(i) - mean(i)) / sd;
      g_out(agent.cfg.p_max * netsim::kNumActions + i) += -coef_surr * (z / sd);
      g_log_std(i) += -coef_surr * (z * z - 1.0) - entropy_coef;  // dH/dlog_std = 1
    }
  }
  if (entropy_out) *entropy_out = entropy;
  return lp;
}

}  // namespace

UpdateStats ppo_update(Agent& agent, std::vector<Transition>& buffer, double bootstrap_value,
                       const PpoHyper& hyper, Rng& rng) {
  UpdateStats stats;
  const int n = static_cast<int>(buffer.size());
  if (n == 0) return stats;

  std::vector<double> rewards(n), values(n);
  std::vector<bool> dones(n);
  for (int i = 0; i < n; ++i) {
    rewards[i] = buffer[i].reward;
    values[i] = buffer[i].value;
    dones[i] = buffer[i].done;
  }
  const GaeOut g = gae(rewards, values, dones, bootstrap_value, hyper.gamma, hyper.gae_lambda);

  // Advantage normalization over the whole buffer.
  double mean = std::accumulate(g.advantages.begin(), g.advantages.end(), 0.0) / n;
  double var = 0.0;
  for (double a : g.advantages) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / std::max(1, n - 1));
  std::vector<double> adv(n);
  for (int i = 0; i < n; ++i) adv[i] = (g.advantages[i] - mean) / (sd > 1e-12 ? sd : 1.0);

  // Keep a restore point in case the update goes non-finite.
  const learnkit::Mlp actor_backup = agent.actor;
  const learnkit::Mlp critic_backup = agent.critic;
  const Vec log_std_backup = agent.log_std;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  double policy_loss_acc = 0.0, value_loss_acc = 0.0;
  long batches = 0;
  bool bad = false;

  for (int epoch = 0; epoch < hyper.epochs && !bad; ++epoch) {
    // Deterministic Fisher-Yates shuffle.
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(i + 1)]);
    for (int start = 0; start < n && !bad; start += hyper.minibatch) {
      const int stop = std::min(n, start + hyper.minibatch);
      learnkit::Gradients ga = learnkit::Gradients::zeros_like(agent.actor);
      learnkit::Gradients gc = learnkit::Gradients::zeros_like(agent.critic);
      Vec g_log_std = Vec::Zero(agent.cfg.ps_dim);
      double batch_ploss = 0.0, batch_vloss = 0.0;

      for (int k = start; k < stop; ++k) {
        const Transition& t = buffer[order[k]];
        const double a_k = adv[order[k]];

        const learnkit::ForwardTrace trace = learnkit::forward_trace(agent.actor, t.obs);
        const Vec& out = trace.activations.back();

        // First pass: logprob only, to pick the min() branch.
        Vec g_out = Vec::Zero(agent.cfg.actor_out_dim());
        Vec g_ls_tmp = Vec::Zero(agent.cfg.ps_dim);
        const double lp_new =
            logprob_and_grad(agent, out, t, 0.0, 0.0, g_out, g_ls_tmp, nullptr);
        const double ratio = std::exp(lp_new - t.logprob);
        const double clipped = std::clamp(ratio, 1.0 - hyper.clip_eps, 1.0 + hyper.clip_eps);
        const double surr1 = ratio * a_k;
        const double surr2 = clipped * a_k;
        const double coef = (surr1 <= surr2) ? ratio * a_k : 0.0;  // active-branch dsurr/dlogprob

        double entropy = 0.0;
        g_out.setZero();
        g_ls_tmp.setZero();
        logprob_and_grad(agent, out, t, coef, hyper.entropy_coef, g_out, g_ls_tmp, &entropy);
        g_log_std += g_ls_tmp;
        ga.add(learnkit::backward(agent.actor, trace, g_out));
        batch_ploss += -std::min(surr1, surr2) - hyper.entropy_coef * entropy;

        // Critic regression to the GAE return.
        const learnkit::ForwardTrace vtrace = learnkit::forward_trace(agent.critic, t.global_obs);
        const double v = vtrace.activations.back()(0);
        const double err = v - g.returns[order[k]];
        batch_vloss += err * err;
        Vec vg(1);
        vg(0) = 2.0 * err;
        gc.add(learnkit::backward(agent.critic, vtrace, vg));
      }

      const double inv = 1.0 / (stop - start);
      ga.scale(inv);
      gc.scale(inv);
      g_log_std *= inv;
      batch_ploss *= inv;
      batch_vloss *= inv;
      if (!std::isfinite(batch_ploss) || !std::isfinite(batch_vloss)) {
        bad = true;
        break;
      }
      try {
        learnkit::adam_step(agent.opt_actor, agent.actor, ga);
        learnkit::adam_step(agent.opt_critic, agent.critic, gc);
        if (agent.cfg.ps_dim > 0) learnkit::adam_vec_step(agent.opt_log_std, agent.log_std, g_log_std);
      } catch (const std::runtime_error&) {
        bad = true;
        break;
      }
      policy_loss_acc += batch_ploss;
      value_loss_acc += batch_vloss;
      ++batches;
    }
  }

  if (bad) {
    agent.actor = actor_backup;
    agent.critic = critic_backup;
    agent.log_std = log_std_backup;
    stats.aborted = true;
    return stats;
  }
  stats.policy_loss = batches > 0 ? policy_loss_acc / batches : 0.0;
  stats.value_loss = batches > 0 ? value_loss_acc / batches : 0.0;
  return stats;
}

double value_update(Agent& agent, const std::vector<Vec>& global_obs,
                    const std::vector<double>& returns, int epochs, int minibatch, Rng& rng) {
  if (global_obs.size() != returns.size()) throw std::invalid_argument("value_update: size mismatch");
  const int n = static_cast<int>(global_obs.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  double last = 0.0;
  for (int e = 0; e < epochs; ++e) {
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(i + 1)]);
    for (int start = 0; start < n; start += minibatch) {
      const int stop = std::min(n, start + minibatch);
      learnkit::Gradients gc = learnkit::Gradients::zeros_like(agent.critic);
      double loss = 0.0;
      for (int k = start; k < stop; ++k) {
        const learnkit::ForwardTrace trace =
            learnkit::forward_trace(agent.critic, global_obs[order[k]]);
        const double err = trace.activations.back()(0) - returns[order[k]];
        loss += err * err;
        Vec vg(1);
        vg(0) = 2.0 * err;
        gc.add(learnkit::backward(agent.critic, trace, vg));
      }
      gc.scale(1.0 / (stop - start));
      learnkit::adam_step(agent.opt_critic, agent.critic, gc);
      last = loss / (stop - start);
    }
  }
  return last;
}

TrainResult train(Env& env, std::vector<Agent>& agents, const TrainConfig& cfg, Rng& rng) {
  if (agents.empty()) throw std::invalid_argument("train: no agents");
  TrainResult result;
  Rng env_rng = rng.split(100);
  Rng act_rng = rng.split(200);
  Rng update_rng = rng.split(300);

  env.reset(env_rng);
  std::vector<std::vector<Transition>> buffers(agents.size());
  const int buffer_target = cfg.hyper.buffer_size();
  long steps = 0;

  auto global_obs_now = [&]() {
    const Vec ro = env.ro_obs();
    const Vec ps = env.ps_obs();
    Vec g(ro.size() + ps.size());
    if (ro.size() > 0) g.head(ro.size()) = ro;
    if (ps.size() > 0) g.tail(ps.size()) = ps;
    return g;
  };

  while (steps < cfg.total_steps) {
    const Vec ro = env.ro_obs();
    const Vec ps = env.ps_obs();
    const Vec gobs = global_obs_now();
    const std::vector<ActionMask> masks = env.ro_masks();

    std::vector<int> ro_actions;
    Vec phases;
    std::vector<ActionSample> samples(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
      Agent& agent = agents[i];
      const Vec& obs = agent.cfg.kind == AgentKind::Routing
                           ? ro
                           : (agent.cfg.kind == AgentKind::PhaseShift ? ps : gobs);
      std::vector<ActionMask> agent_masks(agent.cfg.p_max);
      for (int m = 0; m < agent.cfg.p_max; ++m)
        agent_masks[m] = m < static_cast<int>(masks.size()) ? masks[m]
                                                            : ActionMask{false, false, false, false,
                                                                         false};
      samples[i] = act(agent, obs, agent_masks, act_rng, false);
      if (agent.cfg.p_max > 0) ro_actions = samples[i].cat;
      if (agent.cfg.ps_dim > 0) phases = squash_to_phases(samples[i].gauss_raw);

      Transition t;
      t.obs = obs;
      t.global_obs = gobs;
      t.cat = samples[i].cat;
      t.masks = agent_masks;
      t.gauss_raw = samples[i].gauss_raw;
      t.logprob = samples[i].logprob;
      t.value = agent.value(gobs);
      buffers[i].push_back(std::move(t));
    }

    // Map padded slots to the env's in-flight packets.
    std::vector<int> env_actions;
    for (std::size_t m = 0; m < masks.size(); ++m) {
      if (!ro_actions.empty() && mask_active(masks[m])) env_actions.push_back(ro_actions[m]);
    }

    const Env::StepRewards r = env.step(env_actions, phases, env_rng);
    const bool done = env.done();
    for (std::size_t i = 0; i < agents.size(); ++i) {
      Transition& t = buffers[i].back();
      t.done = done;
      switch (agents[i].cfg.kind) {
        case AgentKind::Routing: t.reward = r.ro; break;
        case AgentKind::PhaseShift: t.reward = r.ps; break;
        case AgentKind::Central: t.reward = r.ro + r.ps; break;
      }
    }
    ++steps;
    if (done) env.reset(env_rng);

    if (static_cast<int>(buffers[0].size()) >= buffer_target) {
      const Vec g_next = global_obs_now();
      for (std::size_t i = 0; i < agents.size(); ++i) {
        const bool tail_done = buffers[i].back().done;
        const double bootstrap = tail_done ? 0.0 : agents[i].value(g_next);
        double rmean = 0.0, rvar = 0.0;
        for (const auto& t : buffers[i]) rmean += t.reward;
        rmean /= buffers[i].size();
        for (const auto& t : buffers[i]) rvar += (t.reward - rmean) * (t.reward - rmean);
        const double rstd = std::sqrt(rvar / std::max<std::size_t>(1, buffers[i].size() - 1));

        const UpdateStats st = ppo_update(agents[i], buffers[i], bootstrap, cfg.hyper, update_rng);
        if (st.aborted) {
          result.aborted = true;
          result.steps = steps;
          return result;
        }
        CurvePoint cp;
        cp.iter = steps;
        cp.agent = agents[i].cfg.kind == AgentKind::Routing
                       ? "RO"
                       : (agents[i].cfg.kind == AgentKind::PhaseShift ? "PS" : "CENTRAL");
        cp.reward_mean = rmean;
        cp.reward_std = rstd;
        cp.value_loss = st.value_loss;
        cp.policy_loss = st.policy_loss;
        result.curve.push_back(cp);
        buffers[i].clear();
      }
      if (cfg.stop_early && cfg.stop_early(steps)) break;
    }
  }
  result.steps = steps;
  return result;
}

// --- RoutingGridEnv -------------------------------------------------------------

RoutingGridEnv::RoutingGridEnv(netsim::NetEnv net, int p_max_slots, int horizon,
                               int packets_per_episode)
    : net_(std::move(net)),
      p_max_(p_max_slots),
      horizon_(horizon),
      packets_per_episode_(packets_per_episode) {}

void RoutingGridEnv::reset(Rng& rng) {
  net_.reset(0);
  steps_ = 0;
  const int rues = static_cast<int>(net_.rue_positions().size());
  const int gbs = static_cast<int>(net_.gbs_positions().size());
  for (int k = 0; k < packets_per_episode_; ++k)
    net_.inject_packet(rng.uniform_int(gbs), rng.uniform_int(rues),
                       net_.traffic().packet_size_bits);
}

bool RoutingGridEnv::done() const {
  return steps_ >= horizon_ || net_.in_flight().empty();
}

Vec RoutingGridEnv::ro_obs() const { return routing_observe(net_, p_max_); }

std::vector<ActionMask> RoutingGridEnv::ro_masks() const {
  std::vector<ActionMask> masks(p_max_, ActionMask{false, false, false, false, false});
  const auto flying = net_.in_flight();
  for (std::size_t i = 0; i < flying.size() && i < static_cast<std::size_t>(p_max_); ++i)
    masks[i] = net_.legal_actions(*flying[i]);
  return masks;
}

Env::StepRewards RoutingGridEnv::step(const std::vector<int>& ro_actions, const Vec& phases,
                                      Rng& rng) {
  (void)phases;
  (void)rng;
  const auto out = net_.step(ro_actions);
  ++steps_;
  std::vector<bool> delivered(out.remaining_m.size(), false);
  for (std::size_t i = 0; i < delivered.size(); ++i)
    delivered[i] = out.status[i] == netsim::StepOutcome::kDelivered;
  StepRewards r;
  r.ro = routing_reward(out.remaining_m, delivered);
  return r;
}

// --- PhaseAlignEnv ---------------------------------------------------------------

PhaseAlignEnv::PhaseAlignEnv(channel::CascadeChannel cascade, channel::RisPanel proto,
                             channel::LinkBudget budget, double power_w, int horizon)
    : cascade_(std::move(cascade)),
      proto_(std::move(proto)),
      budget_(budget),
      power_w_(power_w),
      horizon_(horizon) {}

void PhaseAlignEnv::reset(Rng& rng) {
  (void)rng;
  steps_ = 0;
  gamma_prev_ = 0.0;
}

Vec PhaseAlignEnv::ps_obs() const { return ps_observe(budget_, gamma_prev_); }

Env::StepRewards PhaseAlignEnv::step(const std::vector<int>& ro_actions, const Vec& phases,
                                     Rng& rng) {
  (void)ro_actions;
  (void)rng;
  if (phases.size() != proto_.num_elements)
    throw std::invalid_argument("PhaseAlignEnv: phase vector size mismatch");
  std::vector<channel::RisPanel> panels(cascade_.hops.size(), proto_);
  for (auto& p : panels)
    for (int i = 0; i < p.num_elements; ++i) p.phases_rad[i] = phases(i);
  StepRewards r;
  r.ps = ps_reward(cascade_, panels);
  last_reward_ = r.ps;
  gamma_prev_ = channel::snr(cascade_, panels, budget_, power_w_, 1);
  ++steps_;
  return r;
}

}  // namespace spaceris::mappo
