#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "risfd/beamforming.hpp"
#include "risfd/channel.hpp"
#include "risfd/errors.hpp"
#include "risfd/neural.hpp"
#include "risfd/numerics.hpp"
#include "risfd/sysmodel.hpp"

namespace risfd {

/// Agent observation: the previous step's sum-rate followed by the previous
/// phase vector.
struct State {
    double prev_rate = 0.0;
    std::vector<double> prev_phases;

    std::vector<double> to_vector() const {
        std::vector<double> v;
        v.reserve(prev_phases.size() + 1);
        v.push_back(prev_rate);
        v.insert(v.end(), prev_phases.begin(), prev_phases.end());
        return v;
    }
};

/// Phase vector to execute, wrapped into [-pi, pi) on construction.
struct Action {
    std::vector<double> phases;

    static Action from_raw(std::vector<double> raw) {
        for (double& p : raw) p = wrap_phase(p);
        return {std::move(raw)};
    }
};

struct Transition {
    State s;
    Action a;
    double r = 0.0;
    State s_next;
};

/// Bounded FIFO store of transitions; eviction is strictly oldest-first and
/// sampling is uniform with replacement.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw DomainError("ReplayBuffer: capacity must be positive");
    }

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return store_.size(); }

    void push(Transition t) {
        if (store_.size() < capacity_) {
            store_.push_back(std::move(t));
        } else {
            store_[next_] = std::move(t);
            next_ = (next_ + 1) % capacity_;
        }
    }

    const Transition& operator[](std::size_t i) const { return store_[i]; }

    std::vector<const Transition*> sample(RngStream& rng, std::size_t n) const {
        if (store_.size() < n) throw ContractError("ReplayBuffer: sample on underfilled buffer");
        std::vector<const Transition*> batch(n);
        for (std::size_t i = 0; i < n; ++i) {
            batch[i] = &store_[rng.uniform_index(store_.size())];
        }
        return batch;
    }

private:
    std::size_t capacity_;
    std::size_t next_ = 0;  // oldest slot once full
    std::vector<Transition> store_;
};

struct DdpgConfig {
    int steps_per_episode = 800;   // T
    int episodes = 500;            // K
    int minibatch = 16;            // N_B
    double discount = 0.99;        // rho
    double tau = 0.001;
    double lr_actor = 1e-4;        // nu_A
    double lr_critic = 2e-4;       // nu_C
    double noise_var = 0.1;        // xi variance (per real dimension)
    double noise_decay = 1e-4;     // per global step
    int hidden1 = 100;             // psi_1
    int hidden2 = 45;              // psi_2
    int replay_capacity = 50000;   // D
    bool strict_replay_wait = false;  // wait for a full buffer before training

    void validate() const {
        if (steps_per_episode <= 0 || episodes <= 0 || minibatch <= 0 || replay_capacity <= 0 ||
            hidden1 <= 0 || hidden2 <= 0) {
            throw DomainError("DdpgConfig: counts must be positive");
        }
        if (!(discount > 0.0 && discount <= 1.0)) throw DomainError("DdpgConfig: rho in (0,1]");
        if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("DdpgConfig: tau in (0,1]");
        if (noise_var < 0.0 || noise_decay < 0.0) throw DomainError("DdpgConfig: negative noise");
    }
};

/// Actor maps the (N+1)-wide state to N tanh outputs; critic consumes the
/// state and gets the action injected at its first hidden layer.
inline MlpSpec actor_spec(int n, const DdpgConfig& cfg) {
    return {{n + 1, cfg.hidden1, cfg.hidden2, n},
            {Activation::ReLU, Activation::ReLU, Activation::Tanh},
            std::nullopt};
}

inline MlpSpec critic_spec(int n, const DdpgConfig& cfg) {
    return {{n + 1, cfg.hidden1, cfg.hidden2, 1},
            {Activation::ReLU, Activation::ReLU, Activation::Identity},
            ConcatSpec{1, n}};
}

/// Evaluation and target copies of both networks plus their optimizers.
struct ActorCritic {
    MlpSpec a_spec, q_spec;
    MlpParams actor, critic, actor_target, critic_target;
    AdamState actor_adam, critic_adam;
};

inline ActorCritic make_networks(int n, const DdpgConfig& cfg, RngStream& rng) {
    ActorCritic nets;
    nets.a_spec = actor_spec(n, cfg);
    nets.q_spec = critic_spec(n, cfg);
    nets.actor = init_params(nets.a_spec, rng);
    nets.critic = init_params(nets.q_spec, rng);
    nets.actor_target = nets.actor;
    nets.critic_target = nets.critic;
    nets.actor_adam = make_adam(nets.a_spec, cfg.lr_actor);
    nets.critic_adam = make_adam(nets.q_spec, cfg.lr_critic);
    return nets;
}

/// Deterministic policy output pi * tanh(.), before exploration noise.
inline std::vector<double> policy_phases(const MlpParams& actor, const MlpSpec& spec,
                                         const State& s) {
    std::vector<double> out = mlp_forward(actor, spec, s.to_vector()).output;
    for (double& x : out) x *= kPi;
    return out;
}

/// a = pi * tanh-output + xi, xi i.i.d. real Gaussian with the given standard
/// deviation, wrapped back into [-pi, pi).
inline Action act(const MlpParams& actor, const MlpSpec& spec, const State& s, double noise_std,
                  RngStream& rng) {
    std::vector<double> a = policy_phases(actor, spec, s);
    if (noise_std > 0.0) {
        for (double& x : a) x += noise_std * rng.normal();
    }
    return Action::from_raw(std::move(a));
}

struct StepResult {
    double reward = 0.0;
    State next;
    BeamformerPair w;
};

/// Applies the action, re-optimizes both beamformers for it, and returns the
/// sum-rate reward with the successor state [r, a]. Pure in all inputs.
inline StepResult env_step(const ChannelRealization& ch, const Action& a,
                           const LinkBudget& budget, const BfConfig& bf) {
    const PhaseConfig theta(a.phases);
    BeamformerPair w = optimize_beamformers(ch, theta, budget, bf);
    const double r = sum_rate(ch, theta, w, budget);
    return {r, State{r, a.phases}, std::move(w)};
}

/// Target values y_j = r_j + rho Q'(s_{j+1}, mu'(s_{j+1})); no terminal
/// masking, the task is continuing.
inline std::vector<double> critic_target_values(const std::vector<const Transition*>& batch,
                                                const ActorCritic& nets, double rho) {
    if (batch.empty()) throw ContractError("critic_target_values: empty batch");
    std::vector<double> y(batch.size());
    for (std::size_t j = 0; j < batch.size(); ++j) {
        const State& sn = batch[j]->s_next;
        std::vector<double> an = mlp_forward(nets.actor_target, nets.a_spec, sn.to_vector()).output;
        for (double& x : an) x *= kPi;
        const double q = mlp_forward(nets.critic_target, nets.q_spec, sn.to_vector(), &an).output[0];
        y[j] = batch[j]->r + rho * q;
    }
    return y;
}

struct TrainDiagnostics {
    double critic_loss = 0.0;      // L before the critic step
    double actor_objective = 0.0;  // mean Q(s, mu(s)) before the actor step
};

/// One critic descent step on the squared TD error, one actor ascent step
/// along the critic's action gradient, then soft updates of both targets.
inline TrainDiagnostics train_step(ActorCritic& nets, const ReplayBuffer& buffer,
                                   const DdpgConfig& cfg, RngStream& rng) {
    const std::size_t nb = static_cast<std::size_t>(cfg.minibatch);
    const std::vector<const Transition*> batch = buffer.sample(rng, nb);
    const std::vector<double> y = critic_target_values(batch, nets, cfg.discount);

    TrainDiagnostics diag;

    // Critic: L = (1/N_B) sum (y_j - Q(s_j, a_j))^2.
    MlpParams critic_grads = zero_params(nets.q_spec);
    for (std::size_t j = 0; j < nb; ++j) {
        const std::vector<double> sv = batch[j]->s.to_vector();
        ForwardResult fwd = mlp_forward(nets.critic, nets.q_spec, sv, &batch[j]->a.phases);
        const double q = fwd.output[0];
        diag.critic_loss += (y[j] - q) * (y[j] - q);
        const std::vector<double> upstream{-2.0 * (y[j] - q) / static_cast<double>(nb)};
        GradientResult g = mlp_gradients(nets.critic, nets.q_spec, fwd.tape, upstream);
        critic_grads.add_scaled(g.params, 1.0);
    }
    diag.critic_loss /= static_cast<double>(nb);
    adam_step(nets.critic, critic_grads, nets.critic_adam);

    // Actor: ascend (1/N_B) sum Q(s, mu(s)); Adam minimizes, so feed -grad.
    MlpParams actor_grads = zero_params(nets.a_spec);
    for (std::size_t j = 0; j < nb; ++j) {
        const std::vector<double> sv = batch[j]->s.to_vector();
        ForwardResult actor_fwd = mlp_forward(nets.actor, nets.a_spec, sv);
        std::vector<double> mu = actor_fwd.output;
        for (double& x : mu) x *= kPi;
        ForwardResult critic_fwd = mlp_forward(nets.critic, nets.q_spec, sv, &mu);
        diag.actor_objective += critic_fwd.output[0];
        GradientResult dq = mlp_gradients(nets.critic, nets.q_spec, critic_fwd.tape, {1.0});
        std::vector<double> upstream = dq.side_input;  // dQ/da
        for (double& x : upstream) x *= -kPi / static_cast<double>(nb);  // chain pi, negate for ascent
        GradientResult ga = mlp_gradients(nets.actor, nets.a_spec, actor_fwd.tape, upstream);
        actor_grads.add_scaled(ga.params, 1.0);
    }
    diag.actor_objective /= static_cast<double>(nb);
    adam_step(nets.actor, actor_grads, nets.actor_adam);

    soft_update(nets.critic_target, nets.critic, cfg.tau);
    soft_update(nets.actor_target, nets.actor, cfg.tau);
    return diag;
}

struct EpisodeStats {
    int episode = 0;
    double mean_reward = 0.0;
    double best_reward = 0.0;  // within the episode
    double noise_std = 0.0;    // at the episode's last step
    double critic_loss = 0.0;  // mean over the episode's training steps
};

struct TrainResult {
    double best_reward = 0.0;
    PhaseConfig best_phases;
    BeamformerPair best_w;
    std::vector<EpisodeStats> trace;
};

/// Channels for episode k; the stream is the episode's dedicated child so a
/// factory that redraws and one that returns a fixed drop are both
/// reproducible.
using EnvFactory = std::function<ChannelRealization(int episode, RngStream& rng)>;

namespace detail {
// Child-stream purposes hung off the root seed.
enum RngPurpose : std::uint64_t {
    kNetInit = 1,
    kChannels = 2,
    kPhaseInit = 3,
    kNoise = 4,
    kReplay = 5,
};
}  // namespace detail

/// The full training loop: per episode draw channels, random initial phases
/// and their beamformers, then T steps of act / env_step / store / learn.
/// Returns the executed action with the highest reward ever observed (first
/// occurrence wins ties) and the per-episode trace.
inline TrainResult train(const EnvFactory& env_factory, int n_elements,
                         const LinkBudget& budget, const BfConfig& bf, const DdpgConfig& cfg,
                         const RngStream& root) {
    cfg.validate();
    budget.validate();

    RngStream net_rng = root.spawn(detail::kNetInit);
    ActorCritic nets = make_networks(n_elements, cfg, net_rng);
    ReplayBuffer buffer(static_cast<std::size_t>(cfg.replay_capacity));

    TrainResult result;
    result.best_reward = -1.0;  // any real reward is nonnegative
    const double noise_std0 = std::sqrt(cfg.noise_var);
    long long global_step = 0;

    const std::size_t ready_size = cfg.strict_replay_wait
                                       ? static_cast<std::size_t>(cfg.replay_capacity)
                                       : static_cast<std::size_t>(cfg.minibatch);

    for (int k = 0; k < cfg.episodes; ++k) {
        RngStream ch_rng = root.spawn(detail::kChannels, static_cast<std::uint64_t>(k));
        RngStream phase_rng = root.spawn(detail::kPhaseInit, static_cast<std::uint64_t>(k));
        RngStream noise_rng = root.spawn(detail::kNoise, static_cast<std::uint64_t>(k));
        RngStream replay_rng = root.spawn(detail::kReplay, static_cast<std::uint64_t>(k));

        const ChannelRealization ch = env_factory(k, ch_rng);
        const PhaseConfig init_phases = random_phases(phase_rng, static_cast<std::size_t>(n_elements));
        const BeamformerPair init_w = optimize_beamformers(ch, init_phases, budget, bf);
        State s{sum_rate(ch, init_phases, init_w, budget), init_phases.phases()};

        EpisodeStats stats;
        stats.episode = k;
        stats.best_reward = 0.0;
        double reward_sum = 0.0;
        double loss_sum = 0.0;
        int loss_count = 0;
        double noise_std = noise_std0;

        for (int t = 0; t < cfg.steps_per_episode; ++t) {
            noise_std = noise_std0 * std::pow(1.0 - cfg.noise_decay, static_cast<double>(global_step));
            const Action a = act(nets.actor, nets.a_spec, s, noise_std, noise_rng);
            StepResult step = env_step(ch, a, budget, bf);
            buffer.push(Transition{s, a, step.reward, step.next});

            reward_sum += step.reward;
            stats.best_reward = std::max(stats.best_reward, step.reward);
            if (step.reward > result.best_reward) {
                result.best_reward = step.reward;
                result.best_phases = PhaseConfig(a.phases);
                result.best_w = step.w;
            }

            if (buffer.size() >= ready_size) {
                const TrainDiagnostics diag = train_step(nets, buffer, cfg, replay_rng);
                loss_sum += diag.critic_loss;
                ++loss_count;
            }

            s = step.next;
            ++global_step;
        }

        stats.mean_reward = reward_sum / static_cast<double>(cfg.steps_per_episode);
        stats.noise_std = noise_std;
        stats.critic_loss = loss_count > 0 ? loss_sum / loss_count : 0.0;
        result.trace.push_back(stats);
    }
    return result;
}

/// Per-episode trace table with a header row.
inline void write_trace(std::ostream& os, const std::vector<EpisodeStats>& trace) {
    os << "episode,mean_reward,best_reward,noise_std,critic_loss\n";
    char buf[160];
    for (const EpisodeStats& e : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.10g\n", e.episode, e.mean_reward,
                      e.best_reward, e.noise_std, e.critic_loss);
        os << buf;
    }
}

inline void write_trace(const std::string& path, const std::vector<EpisodeStats>& trace) {
    std::ofstream os(path);
    if (!os) throw IoError(path, "cannot open trace for writing");
    write_trace(os, trace);
    if (!os.good()) throw IoError(path, "write failure in trace");
}

}  // namespace risfd
