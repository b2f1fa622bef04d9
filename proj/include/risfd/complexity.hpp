#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "risfd/errors.hpp"

namespace risfd {

/// Layer-size description of the actor/critic pair, enough to enumerate
/// every weight and bias. critic_concat_layer follows the ConcatSpec
/// convention: the action (width critic_concat_width) is appended after that
/// layer's activations; 0 means action-at-input.
struct NetworkDesign {
    std::vector<int> actor_sizes;
    std::vector<int> critic_sizes;
    int critic_concat_width = 0;
    int critic_concat_layer = 1;
};

/// The proposed design: actor [N+1, psi1, psi2, N]; critic [N+1, psi1, psi2, 1]
/// with the action joined to hidden layer 1.
inline NetworkDesign design_for(int n, int psi1, int psi2) {
    if (n <= 0 || psi1 <= 0 || psi2 <= 0) throw DomainError("design_for: counts must be positive");
    NetworkDesign d;
    d.actor_sizes = {n + 1, psi1, psi2, n};
    d.critic_sizes = {n + 1, psi1, psi2, 1};
    d.critic_concat_width = n;
    d.critic_concat_layer = 1;
    return d;
}

/// Conventional design with the action concatenated straight onto the critic
/// input, used as the literature baseline.
inline NetworkDesign baseline_design_for(int n, int psi1, int psi2) {
    NetworkDesign d = design_for(n, psi1, psi2);
    d.critic_concat_layer = 0;
    return d;
}

/// Parameter/multiplication/addition counts, doubled for the evaluation +
/// target copies. Additions include one per non-input neuron for its
/// activation.
struct CostReport {
    long long params = 0;
    long long mults = 0;
    long long adds = 0;
};

enum class CostMetric { Params, Mults, Adds };

inline long long cost_value(const CostReport& r, CostMetric metric) {
    switch (metric) {
        case CostMetric::Params: return r.params;
        case CostMetric::Mults: return r.mults;
        case CostMetric::Adds: return r.adds;
    }
    return 0;
}

namespace detail {

inline void accumulate_network(CostReport& r, const std::vector<int>& sizes, int concat_width,
                               int concat_layer) {
    if (sizes.size() < 2) throw DomainError("cost: a network needs at least two layers");
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        long long fan_in = sizes[l - 1];
        if (concat_width > 0 && static_cast<int>(l) - 1 == concat_layer) fan_in += concat_width;
        const long long out = sizes[l];
        r.params += (fan_in + 1) * out;  // weights + biases
        r.mults += fan_in * out;
        r.adds += fan_in * out + out;    // dot-product-and-bias adds + one per activation
    }
}

}  // namespace detail

/// Counts obtained by enumerating the instantiated weight matrices and bias
/// vectors of both networks, then doubling for the target copies.
inline CostReport cost(const NetworkDesign& d) {
    CostReport r;
    detail::accumulate_network(r, d.actor_sizes, 0, -1);
    detail::accumulate_network(r, d.critic_sizes, d.critic_concat_width, d.critic_concat_layer);
    r.params *= 2;
    r.mults *= 2;
    r.adds *= 2;
    return r;
}

/// 1 - proposed/baseline for the chosen metric; negative values (proposed
/// larger) are reported as-is.
inline double reduction(const CostReport& proposed, const CostReport& baseline,
                        CostMetric metric) {
    const long long b = cost_value(baseline, metric);
    if (b <= 0) throw DomainError("reduction: baseline count must be positive");
    return 1.0 - static_cast<double>(cost_value(proposed, metric)) / static_cast<double>(b);
}

/// Limit of the reduction as N grows with fixed hidden sizes. Both count
/// families are affine in N, so the limit is one minus the slope ratio; the
/// slopes are recovered exactly from two large-N evaluations.
template <typename ProposedAt, typename BaselineAt>
inline double reduction_asymptote(ProposedAt&& proposed_at, BaselineAt&& baseline_at,
                                  CostMetric metric) {
    const long long n1 = 1 << 20, n2 = 1 << 21;
    const long long sp =
        cost_value(proposed_at(static_cast<int>(n2)), metric) - cost_value(proposed_at(static_cast<int>(n1)), metric);
    const long long sb =
        cost_value(baseline_at(static_cast<int>(n2)), metric) - cost_value(baseline_at(static_cast<int>(n1)), metric);
    if (sb <= 0) throw DomainError("reduction_asymptote: baseline slope must be positive");
    return 1.0 - static_cast<double>(sp) / static_cast<double>(sb);
}

struct ComplexityRow {
    int n = 0;
    CostReport proposed;
    double reduction_params = 0.0;
    double reduction_mults = 0.0;
    double reduction_adds = 0.0;
};

inline ComplexityRow complexity_row(int n, const NetworkDesign& proposed,
                                    const NetworkDesign& baseline) {
    ComplexityRow row;
    row.n = n;
    row.proposed = cost(proposed);
    const CostReport base = cost(baseline);
    row.reduction_params = reduction(row.proposed, base, CostMetric::Params);
    row.reduction_mults = reduction(row.proposed, base, CostMetric::Mults);
    row.reduction_adds = reduction(row.proposed, base, CostMetric::Adds);
    return row;
}

/// Report table: one row per N with counts and per-metric reductions.
inline void write_complexity_table(std::ostream& os, const std::vector<ComplexityRow>& rows) {
    os << "n,c_p,c_m,c_a,reduction_p,reduction_m,reduction_a\n";
    char buf[200];
    for (const ComplexityRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%lld,%lld,%lld,%.10g,%.10g,%.10g\n", r.n,
                      r.proposed.params, r.proposed.mults, r.proposed.adds, r.reduction_params,
                      r.reduction_mults, r.reduction_adds);
        os << buf;
    }
}

inline void write_complexity_table(const std::string& path, const std::vector<ComplexityRow>& rows) {
    std::ofstream os(path);
    if (!os) throw IoError(path, "cannot open complexity table for writing");
    write_complexity_table(os, rows);
    if (!os.good()) throw IoError(path, "write failure in complexity table");
}

}  // namespace risfd
