#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "risfd/beamforming.hpp"
#include "risfd/channel.hpp"
#include "risfd/complexity.hpp"
#include "risfd/config.hpp"
#include "risfd/drl.hpp"
#include "risfd/errors.hpp"
#include "risfd/numerics.hpp"
#include "risfd/sysmodel.hpp"

namespace risfd {

inline const char* scenario_name(ScenarioId id) {
    switch (id) {
        case ScenarioId::S1: return "s1";
        case ScenarioId::S2: return "s2";
        case ScenarioId::S3: return "s3";
    }
    return "?";
}

inline ScenarioId scenario_from_name(const std::string& s) {
    if (s == "s1" || s == "1") return ScenarioId::S1;
    if (s == "s2" || s == "2") return ScenarioId::S2;
    if (s == "s3" || s == "3") return ScenarioId::S3;
    throw ContractError("unknown scenario: " + s);
}

/// Fully resolved experiment description. Physical defaults follow the
/// simulation setup; the scale presets change only training budgets, seeds,
/// and sweep grids.
struct ExperimentConfig {
    std::string kind = "n-sweep";  // n-sweep | deploy-sweep | complexity | train-once

    Geometry geom;
    ChannelParams chan;
    double rician_k = 10.0;
    bool s3_blocks_r2_to_s2 = false;
    bool redraw_channels = true;  // fresh drop per episode vs one drop per run

    int m = 4;
    bool m_explicit = false;

    LinkBudget budget{dbm_to_watt(-80.0), dbm_to_watt(15.0)};
    BfConfig bf;
    DdpgConfig ddpg;

    std::vector<std::string> deployments = {"single", "distributed"};
    std::vector<ScenarioId> scenarios = {ScenarioId::S1};
    std::vector<int> n_list = {20, 30, 40, 50, 60};
    std::vector<double> d01_list = {1, 7, 13, 19, 25, 31, 37, 43, 49};
    std::vector<double> d02_list = {1, 7, 13, 19, 25, 31, 37, 43, 49};
    double d01_fixed = 1.0;
    double d02_fixed = 49.0;

    int random_trials = 200;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    int baseline_psi1 = 100;
    int baseline_psi2 = 45;
    bool baseline_action_at_input = true;
    std::vector<int> complexity_n_list = {20, 25, 30, 35, 40, 45, 50, 55, 60};

    std::string out_path = "results.csv";

    Scenario scenario_of(ScenarioId id) const {
        Scenario s = scenario(id, rician_k);
        s.s3_blocks_r2_to_s2 = s3_blocks_r2_to_s2;
        return s;
    }
};

/// Training budgets from the reported setup; sweeps over many seeds at this
/// scale are compute-heavy.
inline ExperimentConfig paper_scale() { return ExperimentConfig{}; }

/// Reduced preset sized for a desktop run: shorter episodes, fewer seeds,
/// smaller grids, one channel drop per run.
inline ExperimentConfig desk_scale() {
    ExperimentConfig cfg;
    cfg.ddpg.steps_per_episode = 150;
    cfg.ddpg.episodes = 40;
    cfg.ddpg.replay_capacity = 20000;
    cfg.redraw_channels = false;
    cfg.n_list = {8, 16, 24};
    cfg.d01_list = {1, 13, 25, 37, 49};
    cfg.d02_list = {1, 13, 25, 37, 49};
    cfg.random_trials = 50;
    cfg.seeds = {1, 2, 3, 4, 5};
    return cfg;
}

inline ExperimentConfig scale_preset(const std::string& name) {
    if (name == "paper") return paper_scale();
    if (name == "desk") return desk_scale();
    throw ContractError("unknown scale preset: " + name);
}

/// Overlays a flat key-value document onto a preset. Unknown keys fail fast.
inline void apply_kv(ExperimentConfig& cfg, const KvConfig& kv) {
    static const std::vector<std::string> known = {
        "experiment.kind", "geometry.d1", "geometry.d01", "geometry.d02", "geometry.dv1",
        "geometry.dv2", "channel.pl0_db", "channel.ref_distance_m", "channel.zeta_direct",
        "channel.zeta_bs_ris", "channel.zeta_ue_ris", "channel.si_pl_db", "channel.rician_k",
        "channel.s3_blocks_r2_to_s2", "channel.redraw_per_episode", "model.m",
        "budget.pmax_dbm", "budget.sigma2_dbm", "beamforming.tol", "beamforming.max_iter",
        "beamforming.sigma2_in_mmse_weight", "ddpg.steps", "ddpg.episodes", "ddpg.minibatch",
        "ddpg.discount", "ddpg.tau", "ddpg.lr_actor", "ddpg.lr_critic", "ddpg.noise_var",
        "ddpg.noise_decay", "ddpg.hidden1", "ddpg.hidden2", "ddpg.replay_capacity",
        "ddpg.strict_replay_wait", "sweep.deployments", "sweep.scenarios", "sweep.n_list",
        "sweep.d01_list", "sweep.d02_list", "sweep.d01_fixed", "sweep.d02_fixed",
        "baseline.psi1", "baseline.psi2", "baseline.action_at_input", "complexity.n_list",
        "run.random_trials", "run.seeds", "run.out",
    };
    for (const auto& [key, value] : kv.entries()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ContractError("unknown config key: " + key);
        }
        (void)value;
    }

    cfg.kind = kv.get_string("experiment.kind", cfg.kind);
    cfg.geom.d1 = kv.get_double("geometry.d1", cfg.geom.d1);
    cfg.geom.d01 = kv.get_double("geometry.d01", cfg.geom.d01);
    cfg.geom.d02 = kv.get_double("geometry.d02", cfg.geom.d02);
    cfg.geom.dv1 = kv.get_double("geometry.dv1", cfg.geom.dv1);
    cfg.geom.dv2 = kv.get_double("geometry.dv2", cfg.geom.dv2);
    cfg.chan.pl0_db = kv.get_double("channel.pl0_db", cfg.chan.pl0_db);
    cfg.chan.ref_distance_m = kv.get_double("channel.ref_distance_m", cfg.chan.ref_distance_m);
    cfg.chan.zeta_direct = kv.get_double("channel.zeta_direct", cfg.chan.zeta_direct);
    cfg.chan.zeta_bs_ris = kv.get_double("channel.zeta_bs_ris", cfg.chan.zeta_bs_ris);
    cfg.chan.zeta_ue_ris = kv.get_double("channel.zeta_ue_ris", cfg.chan.zeta_ue_ris);
    cfg.chan.si_pl_db = kv.get_double("channel.si_pl_db", cfg.chan.si_pl_db);
    cfg.rician_k = kv.get_double("channel.rician_k", cfg.rician_k);
    cfg.s3_blocks_r2_to_s2 = kv.get_bool("channel.s3_blocks_r2_to_s2", cfg.s3_blocks_r2_to_s2);
    cfg.redraw_channels = kv.get_bool("channel.redraw_per_episode", cfg.redraw_channels);
    if (kv.has("model.m")) {
        cfg.m = static_cast<int>(kv.get_int("model.m", cfg.m));
        cfg.m_explicit = true;
    }
    if (kv.has("budget.pmax_dbm")) cfg.budget.pmax_w = dbm_to_watt(kv.get_double("budget.pmax_dbm", 15.0));
    if (kv.has("budget.sigma2_dbm")) cfg.budget.sigma2_w = dbm_to_watt(kv.get_double("budget.sigma2_dbm", -80.0));
    cfg.bf.tol = kv.get_double("beamforming.tol", cfg.bf.tol);
    cfg.bf.max_iter = static_cast<int>(kv.get_int("beamforming.max_iter", cfg.bf.max_iter));
    cfg.bf.sigma2_in_mmse_weight =
        kv.get_bool("beamforming.sigma2_in_mmse_weight", cfg.bf.sigma2_in_mmse_weight);
    cfg.ddpg.steps_per_episode = static_cast<int>(kv.get_int("ddpg.steps", cfg.ddpg.steps_per_episode));
    cfg.ddpg.episodes = static_cast<int>(kv.get_int("ddpg.episodes", cfg.ddpg.episodes));
    cfg.ddpg.minibatch = static_cast<int>(kv.get_int("ddpg.minibatch", cfg.ddpg.minibatch));
    cfg.ddpg.discount = kv.get_double("ddpg.discount", cfg.ddpg.discount);
    cfg.ddpg.tau = kv.get_double("ddpg.tau", cfg.ddpg.tau);
    cfg.ddpg.lr_actor = kv.get_double("ddpg.lr_actor", cfg.ddpg.lr_actor);
    cfg.ddpg.lr_critic = kv.get_double("ddpg.lr_critic", cfg.ddpg.lr_critic);
    cfg.ddpg.noise_var = kv.get_double("ddpg.noise_var", cfg.ddpg.noise_var);
    cfg.ddpg.noise_decay = kv.get_double("ddpg.noise_decay", cfg.ddpg.noise_decay);
    cfg.ddpg.hidden1 = static_cast<int>(kv.get_int("ddpg.hidden1", cfg.ddpg.hidden1));
    cfg.ddpg.hidden2 = static_cast<int>(kv.get_int("ddpg.hidden2", cfg.ddpg.hidden2));
    cfg.ddpg.replay_capacity = static_cast<int>(kv.get_int("ddpg.replay_capacity", cfg.ddpg.replay_capacity));
    cfg.ddpg.strict_replay_wait = kv.get_bool("ddpg.strict_replay_wait", cfg.ddpg.strict_replay_wait);
    cfg.deployments = kv.get_list("sweep.deployments", cfg.deployments);
    if (kv.has("sweep.scenarios")) {
        cfg.scenarios.clear();
        for (const std::string& s : kv.get_list("sweep.scenarios", {})) {
            cfg.scenarios.push_back(scenario_from_name(s));
        }
    }
    if (kv.has("sweep.n_list")) {
        cfg.n_list.clear();
        for (long long n : kv.get_int_list("sweep.n_list", {})) cfg.n_list.push_back(static_cast<int>(n));
    }
    cfg.d01_list = kv.get_double_list("sweep.d01_list", cfg.d01_list);
    cfg.d02_list = kv.get_double_list("sweep.d02_list", cfg.d02_list);
    cfg.d01_fixed = kv.get_double("sweep.d01_fixed", cfg.d01_fixed);
    cfg.d02_fixed = kv.get_double("sweep.d02_fixed", cfg.d02_fixed);
    cfg.baseline_psi1 = static_cast<int>(kv.get_int("baseline.psi1", cfg.baseline_psi1));
    cfg.baseline_psi2 = static_cast<int>(kv.get_int("baseline.psi2", cfg.baseline_psi2));
    cfg.baseline_action_at_input = kv.get_bool("baseline.action_at_input", cfg.baseline_action_at_input);
    if (kv.has("complexity.n_list")) {
        cfg.complexity_n_list.clear();
        for (long long n : kv.get_int_list("complexity.n_list", {})) {
            cfg.complexity_n_list.push_back(static_cast<int>(n));
        }
    }
    cfg.random_trials = static_cast<int>(kv.get_int("run.random_trials", cfg.random_trials));
    if (kv.has("run.seeds")) {
        cfg.seeds.clear();
        for (long long s : kv.get_int_list("run.seeds", {})) {
            cfg.seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }
    cfg.out_path = kv.get_string("run.out", cfg.out_path);
}

namespace detail {
inline void dump_kv(std::ostream& os, const char* key, const std::string& v) {
    os << key << " = " << v << '\n';
}
inline void dump_kv(std::ostream& os, const char* key, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    os << key << " = " << buf << '\n';
}
inline void dump_kv(std::ostream& os, const char* key, long long v) {
    os << key << " = " << v << '\n';
}
inline void dump_kv(std::ostream& os, const char* key, bool v) {
    os << key << " = " << (v ? "true" : "false") << '\n';
}
template <typename T>
inline void dump_list(std::ostream& os, const char* key, const std::vector<T>& v) {
    os << key << " = ";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    os << '\n';
}
}  // namespace detail

/// The fully resolved configuration in the same key-value syntax the loader
/// accepts; written alongside every result file.
inline void write_resolved_config(std::ostream& os, const ExperimentConfig& cfg) {
    using detail::dump_kv;
    dump_kv(os, "experiment.kind", cfg.kind);
    dump_kv(os, "geometry.d1", cfg.geom.d1);
    dump_kv(os, "geometry.d01", cfg.geom.d01);
    dump_kv(os, "geometry.d02", cfg.geom.d02);
    dump_kv(os, "geometry.dv1", cfg.geom.dv1);
    dump_kv(os, "geometry.dv2", cfg.geom.dv2);
    dump_kv(os, "channel.pl0_db", cfg.chan.pl0_db);
    dump_kv(os, "channel.ref_distance_m", cfg.chan.ref_distance_m);
    dump_kv(os, "channel.zeta_direct", cfg.chan.zeta_direct);
    dump_kv(os, "channel.zeta_bs_ris", cfg.chan.zeta_bs_ris);
    dump_kv(os, "channel.zeta_ue_ris", cfg.chan.zeta_ue_ris);
    dump_kv(os, "channel.si_pl_db", cfg.chan.si_pl_db);
    dump_kv(os, "channel.rician_k", cfg.rician_k);
    dump_kv(os, "channel.s3_blocks_r2_to_s2", cfg.s3_blocks_r2_to_s2);
    dump_kv(os, "channel.redraw_per_episode", cfg.redraw_channels);
    dump_kv(os, "model.m", static_cast<long long>(cfg.m));
    dump_kv(os, "budget.pmax_w", cfg.budget.pmax_w);
    dump_kv(os, "budget.sigma2_w", cfg.budget.sigma2_w);
    dump_kv(os, "beamforming.tol", cfg.bf.tol);
    dump_kv(os, "beamforming.max_iter", static_cast<long long>(cfg.bf.max_iter));
    dump_kv(os, "beamforming.sigma2_in_mmse_weight", cfg.bf.sigma2_in_mmse_weight);
    dump_kv(os, "ddpg.steps", static_cast<long long>(cfg.ddpg.steps_per_episode));
    dump_kv(os, "ddpg.episodes", static_cast<long long>(cfg.ddpg.episodes));
    dump_kv(os, "ddpg.minibatch", static_cast<long long>(cfg.ddpg.minibatch));
    dump_kv(os, "ddpg.discount", cfg.ddpg.discount);
    dump_kv(os, "ddpg.tau", cfg.ddpg.tau);
    dump_kv(os, "ddpg.lr_actor", cfg.ddpg.lr_actor);
    dump_kv(os, "ddpg.lr_critic", cfg.ddpg.lr_critic);
    dump_kv(os, "ddpg.noise_var", cfg.ddpg.noise_var);
    dump_kv(os, "ddpg.noise_decay", cfg.ddpg.noise_decay);
    dump_kv(os, "ddpg.hidden1", static_cast<long long>(cfg.ddpg.hidden1));
    dump_kv(os, "ddpg.hidden2", static_cast<long long>(cfg.ddpg.hidden2));
    dump_kv(os, "ddpg.replay_capacity", static_cast<long long>(cfg.ddpg.replay_capacity));
    dump_kv(os, "ddpg.strict_replay_wait", cfg.ddpg.strict_replay_wait);
    detail::dump_list(os, "sweep.deployments", cfg.deployments);
    {
        std::vector<std::string> names;
        for (ScenarioId id : cfg.scenarios) names.push_back(scenario_name(id));
        detail::dump_list(os, "sweep.scenarios", names);
    }
    detail::dump_list(os, "sweep.n_list", cfg.n_list);
    detail::dump_list(os, "sweep.d01_list", cfg.d01_list);
    detail::dump_list(os, "sweep.d02_list", cfg.d02_list);
    dump_kv(os, "sweep.d01_fixed", cfg.d01_fixed);
    dump_kv(os, "sweep.d02_fixed", cfg.d02_fixed);
    dump_kv(os, "baseline.psi1", static_cast<long long>(cfg.baseline_psi1));
    dump_kv(os, "baseline.psi2", static_cast<long long>(cfg.baseline_psi2));
    dump_kv(os, "baseline.action_at_input", cfg.baseline_action_at_input);
    detail::dump_list(os, "complexity.n_list", cfg.complexity_n_list);
    dump_kv(os, "run.random_trials", static_cast<long long>(cfg.random_trials));
    detail::dump_list(os, "run.seeds", cfg.seeds);
    dump_kv(os, "run.out", cfg.out_path);
}

/// One metric value of one run. Reproducible from (config, seed) alone, which
/// is why wall-clock runtime is logged to stderr instead of emitted here.
struct ResultRecord {
    std::string kind;
    std::string scheme;
    std::string scenario;
    int n = 0;
    double d01 = 0.0;
    double d02 = 0.0;
    std::uint64_t seed = 0;
    std::string metric;
    double value = 0.0;

    auto key() const { return std::tie(kind, scheme, scenario, n, d01, d02, seed, metric); }
};

/// Header plus one comma-separated row per record, floats at 10 significant
/// digits. Records are emitted in the given order; sweeps sort beforehand.
inline void emit_csv(std::ostream& os, const std::vector<ResultRecord>& records) {
    os << "kind,scheme,scenario,n,d01,d02,seed,metric,value\n";
    char buf[64];
    for (const ResultRecord& r : records) {
        os << r.kind << ',' << r.scheme << ',' << r.scenario << ',' << r.n << ',';
        std::snprintf(buf, sizeof buf, "%.10g", r.d01);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.10g", r.d02);
        os << buf << ',' << r.seed << ',' << r.metric << ',';
        std::snprintf(buf, sizeof buf, "%.10g", r.value);
        os << buf << '\n';
    }
}

inline void emit_csv(const std::string& path, const std::vector<ResultRecord>& records) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError(path, "cannot open CSV for writing");
    emit_csv(os, records);
    if (!os.good()) throw IoError(path, "write failure in CSV");
}

inline void sort_records(std::vector<ResultRecord>& records) {
    std::sort(records.begin(), records.end(),
              [](const ResultRecord& a, const ResultRecord& b) { return a.key() < b.key(); });
}

/// Mean sum-rate over uniformly drawn phase vectors, beamformers re-optimized
/// for every draw. The non-optimized reference curve.
inline double random_phase_baseline(const ChannelRealization& ch, const LinkBudget& budget,
                                    const BfConfig& bf, RngStream& rng, int trials) {
    if (trials < 1) throw DomainError("random_phase_baseline: trials must be >= 1");
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
        const PhaseConfig theta = random_phases(rng, static_cast<std::size_t>(ch.n_total()));
        const BeamformerPair w = optimize_beamformers(ch, theta, budget, bf);
        acc += sum_rate(ch, theta, w, budget);
    }
    return acc / trials;
}

namespace detail {

inline std::uint64_t mix_string(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) h = splitmix64(h ^ c);
    return h;
}

inline std::uint64_t mix_double(std::uint64_t h, double v) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof v);
    std::memcpy(&bits, &v, sizeof bits);
    return splitmix64(h ^ bits);
}

/// Stable stream id for a task; independent of task order and worker count.
struct TaskStreams {
    RngStream channels;  // shared by methods that must see the same drop
    RngStream method;    // training / baseline randomness
};

inline TaskStreams task_streams(std::uint64_t seed, const std::string& scheme,
                                const std::string& scenario, int n, double d01, double d02,
                                const std::string& method) {
    std::uint64_t shared = 0x5157c64673ce47ddULL;
    shared = mix_string(shared, scheme);
    shared = mix_string(shared, scenario);
    shared = splitmix64(shared ^ static_cast<std::uint64_t>(n));
    shared = mix_double(shared, d01);
    shared = mix_double(shared, d02);
    const std::uint64_t method_id = mix_string(shared, method + "|train");
    return {RngStream(seed, splitmix64(shared ^ 0x9ae16a3b2f90404fULL)),
            RngStream(seed, method_id)};
}

inline int worker_count() {
    if (const char* env = std::getenv("RISFD_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs independent tasks on a small pool. Each task owns its RNG streams and
/// writes only its own results, so scheduling cannot change any value.
inline void run_tasks(std::vector<std::function<void()>>& tasks) {
    const int workers = std::min<int>(worker_count(), static_cast<int>(tasks.size()));
    if (workers <= 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= tasks.size()) return;
                tasks[idx]();
            }
        });
    }
    for (auto& th : pool) th.join();
}

inline DeploymentScheme scheme_from_name(const std::string& name, int n) {
    if (name == "single") return single_ris(n);
    if (name == "distributed") return distributed_ris(n);
    throw ContractError("unknown deployment: " + name);
}

inline EnvFactory make_env_factory(const ExperimentConfig& cfg, const Geometry& geom,
                                   const DeploymentScheme& scheme, const Scenario& scen,
                                   const RngStream& chan_root) {
    if (cfg.redraw_channels) {
        const ChannelParams params = cfg.chan;
        const int m = cfg.m;
        return [geom, scheme, scen, params, m](int /*episode*/, RngStream& rng) {
            return realize_drop(rng, geom, scheme, scen, m, params);
        };
    }
    RngStream drop_rng = chan_root;
    auto drop = std::make_shared<ChannelRealization>(
        realize_drop(drop_rng, geom, scheme, scen, cfg.m, cfg.chan));
    return [drop](int /*episode*/, RngStream& /*rng*/) { return *drop; };
}

struct TrainTaskResult {
    double best_sum_rate = 0.0;
};

inline TrainTaskResult run_train_task(const ExperimentConfig& cfg, const Geometry& geom,
                                      const DeploymentScheme& scheme, const Scenario& scen,
                                      const TaskStreams& streams) {
    const EnvFactory factory = make_env_factory(cfg, geom, scheme, scen, streams.channels);
    const TrainResult result =
        train(factory, scheme.total_elements, cfg.budget, cfg.bf, cfg.ddpg, streams.method);
    return {result.best_reward};
}

}  // namespace detail

inline void warn_default_m(const ExperimentConfig& cfg) {
    if (!cfg.m_explicit) {
        std::fprintf(stderr,
                     "[risfd] NOTE: model.m not set; using M = %d transmit antennas. Set model.m "
                     "explicitly to silence this.\n",
                     cfg.m);
    }
}

/// Deployment study: trains at every RIS position. Single: sweep d01.
/// Distributed: sweep d01 with d02 fixed, then d02 with d01 fixed.
inline std::vector<ResultRecord> run_deployment_sweep(const ExperimentConfig& cfg) {
    warn_default_m(cfg);
    const ScenarioId scen_id = cfg.scenarios.empty() ? ScenarioId::S1 : cfg.scenarios.front();
    const Scenario scen = cfg.scenario_of(scen_id);
    const int n = cfg.n_list.empty() ? 20 : cfg.n_list.front();

    struct Job {
        std::string scheme;
        double d01, d02;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    auto add_job = [&jobs](const std::string& scheme, double d01, double d02, std::uint64_t seed) {
        for (const Job& j : jobs) {
            if (j.scheme == scheme && j.d01 == d01 && j.d02 == d02 && j.seed == seed) return;
        }
        jobs.push_back({scheme, d01, d02, seed});
    };
    for (const std::string& scheme : cfg.deployments) {
        if (scheme == "single") {
            for (double d01 : cfg.d01_list) {
                for (std::uint64_t seed : cfg.seeds) add_job(scheme, d01, cfg.d02_fixed, seed);
            }
        } else {
            for (double d01 : cfg.d01_list) {
                for (std::uint64_t seed : cfg.seeds) add_job(scheme, d01, cfg.d02_fixed, seed);
            }
            for (double d02 : cfg.d02_list) {
                for (std::uint64_t seed : cfg.seeds) add_job(scheme, cfg.d01_fixed, d02, seed);
            }
        }
    }

    std::vector<ResultRecord> records(jobs.size());
    std::vector<std::function<void()>> tasks;
    tasks.reserve(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        tasks.push_back([&, i] {
            const Job& job = jobs[i];
            Geometry geom = cfg.geom;
            geom.d01 = job.d01;
            geom.d02 = job.d02;
            const DeploymentScheme scheme = detail::scheme_from_name(job.scheme, n);
            const detail::TaskStreams streams = detail::task_streams(
                job.seed, job.scheme, scenario_name(scen_id), n, job.d01, job.d02, "drl");
            const detail::TrainTaskResult out = detail::run_train_task(cfg, geom, scheme, scen, streams);
            records[i] = {"deploy-sweep", job.scheme, scenario_name(scen_id), n,
                          job.d01,        job.d02,    job.seed,               "sum_rate",
                          out.best_sum_rate};
        });
    }
    detail::run_tasks(tasks);
    sort_records(records);
    return records;
}

/// Element-count study: DRL and random-phase curves for both deployments in
/// every configured scenario.
inline std::vector<ResultRecord> run_n_sweep(const ExperimentConfig& cfg) {
    warn_default_m(cfg);
    struct Job {
        ScenarioId scen;
        std::string deployment;
        std::string method;  // drl | random
        int n;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (ScenarioId scen : cfg.scenarios) {
        for (const std::string& deployment : cfg.deployments) {
            for (int n : cfg.n_list) {
                for (std::uint64_t seed : cfg.seeds) {
                    jobs.push_back({scen, deployment, "drl", n, seed});
                    jobs.push_back({scen, deployment, "random", n, seed});
                }
            }
        }
    }

    std::vector<ResultRecord> records(jobs.size());
    std::vector<std::function<void()>> tasks;
    tasks.reserve(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        tasks.push_back([&, i] {
            const Job& job = jobs[i];
            Geometry geom = cfg.geom;
            geom.d01 = cfg.d01_fixed;
            geom.d02 = cfg.d02_fixed;
            const Scenario scen = cfg.scenario_of(job.scen);
            const DeploymentScheme scheme = detail::scheme_from_name(job.deployment, job.n);
            const detail::TaskStreams streams =
                detail::task_streams(job.seed, job.deployment, scenario_name(job.scen), job.n,
                                     geom.d01, geom.d02, job.method);
            double value = 0.0;
            if (job.method == "drl") {
                value = detail::run_train_task(cfg, geom, scheme, scen, streams).best_sum_rate;
            } else {
                RngStream chan_rng = streams.channels;
                const ChannelRealization drop =
                    realize_drop(chan_rng, geom, scheme, scen, cfg.m, cfg.chan);
                RngStream phase_rng = streams.method;
                value = random_phase_baseline(drop, cfg.budget, cfg.bf, phase_rng, cfg.random_trials);
            }
            records[i] = {"n-sweep", job.method + "-" + job.deployment, scenario_name(job.scen),
                          job.n,     geom.d01,  geom.d02, job.seed, "sum_rate", value};
        });
    }
    detail::run_tasks(tasks);
    sort_records(records);
    return records;
}

/// Cost table of the proposed design against the configured baseline.
inline std::vector<ComplexityRow> run_complexity_sweep(const ExperimentConfig& cfg) {
    std::vector<ComplexityRow> rows;
    for (int n : cfg.complexity_n_list) {
        const NetworkDesign proposed = design_for(n, cfg.ddpg.hidden1, cfg.ddpg.hidden2);
        const NetworkDesign baseline =
            cfg.baseline_action_at_input
                ? baseline_design_for(n, cfg.baseline_psi1, cfg.baseline_psi2)
                : design_for(n, cfg.baseline_psi1, cfg.baseline_psi2);
        rows.push_back(complexity_row(n, proposed, baseline));
    }
    return rows;
}

}  // namespace risfd
