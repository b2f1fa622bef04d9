#pragma once

#include <cmath>
#include <cstdlib>

#include "risfd/errors.hpp"
#include "risfd/numerics.hpp"
#include "risfd/sysmodel.hpp"

namespace risfd {

/// Knobs of the closed-form beamformer step. sigma2_in_mmse_weight switches
/// the f denominator to b^2 + SI + sigma^2; off by default, keeping the
/// literal b^2 + SI form.
struct BfConfig {
    double tol = 1e-4;          // sum-rate change stopping threshold, bps/Hz
    int max_iter = 50;
    bool sigma2_in_mmse_weight = false;
    double v_floor = 1e-12;     // v = 0 would make the system rank one for M > 1
    double bisect_rel_tol = 1e-8;
    int bisect_max_iter = 200;
};

/// Per-receiver MMSE-style auxiliaries:
///   b_i     = |alpha_i w_tx|^2
///   f_i     = b_i / (b_i^2 + |h^H_{S_i S_i} w_i|^2)
///   beta_i  = f_i alpha_i + f_tx h^H_{S_tx S_tx}
///   Sigma_i = 1 - f_i b_i
/// indexed by receiver; tx = 3 - i is the node transmitting toward i.
struct AuxCoefficients {
    double b1 = 0.0, b2 = 0.0;
    double f1 = 0.0, f2 = 0.0;
    CVec beta1, beta2;
    double sigma1 = 0.0, sigma2 = 0.0;
};

namespace detail {

inline double mmse_weight(double b, double si, double sigma2, bool include_noise) {
    const double denom = b * b + si + (include_noise ? sigma2 : 0.0);
    if (denom == 0.0) {
        throw DegenerateLinkError("aux_coefficients: zero f denominator (dead link)");
    }
    return b / denom;
}

}  // namespace detail

inline AuxCoefficients aux_coefficients(const ChannelRealization& ch, const PhaseConfig& theta,
                                        const BeamformerPair& w, const LinkBudget& budget,
                                        const BfConfig& cfg = {}) {
    const CVec alpha1 = effective_channel(ch, theta, 1);
    const CVec alpha2 = effective_channel(ch, theta, 2);

    AuxCoefficients aux;
    aux.b1 = std::norm(rowdot(alpha1, w.w2));
    aux.b2 = std::norm(rowdot(alpha2, w.w1));
    const double si1 = std::norm(vdot(ch.si_s1, w.w1));
    const double si2 = std::norm(vdot(ch.si_s2, w.w2));
    aux.f1 = detail::mmse_weight(aux.b1, si1, budget.sigma2_w, cfg.sigma2_in_mmse_weight);
    aux.f2 = detail::mmse_weight(aux.b2, si2, budget.sigma2_w, cfg.sigma2_in_mmse_weight);
    aux.sigma1 = 1.0 - aux.f1 * aux.b1;
    aux.sigma2 = 1.0 - aux.f2 * aux.b2;
    // beta for receiver i couples its own f with the transmitter's SI loop.
    aux.beta1 = add(scale(alpha1, aux.f1), scale(conj(ch.si_s2), aux.f2));
    aux.beta2 = add(scale(alpha2, aux.f2), scale(conj(ch.si_s1), aux.f1));
    return aux;
}

struct BeamformerSolution {
    CVec w;
    double v = 0.0;
};

/// Solves max -1/2 f |alpha w|^2 + Re(beta w) s.t. ||w||^2 <= P through the
/// regularized system (v I + f alpha^H alpha) w = beta^H, with the dual v
/// found by bisection on g(v) = ||w(v)||^2 - P.
inline BeamformerSolution solve_beamformer(double f, const CVec& alpha, const CVec& beta,
                                           double pmax, const BfConfig& cfg = {}) {
    if (f < 0.0) throw DomainError("solve_beamformer: f must be nonnegative");
    if (!(pmax > 0.0)) throw DomainError("solve_beamformer: P_max must be positive");
    const std::size_t m = beta.size();
    if (norm_sq(beta) == 0.0) return {CVec(m), 0.0};

    const CVec a = conj(alpha);  // column alpha^H
    const CVec b = conj(beta);   // column beta^H
    const auto w_of = [&](double v) { return solve_rank1_regularized(v, f, a, b); };
    const auto excess = [&](const CVec& w) { return norm_sq(w) - pmax; };

    CVec w = w_of(cfg.v_floor);
    if (excess(w) <= 0.0) return {std::move(w), cfg.v_floor};  // inactive power constraint

    double lo = cfg.v_floor;
    double hi = norm(beta) / std::sqrt(pmax);  // ||w(hi)|| <= ||beta||/hi = sqrt(P)
    const double tol = cfg.bisect_rel_tol * pmax;
    for (int it = 0; it < cfg.bisect_max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        w = w_of(mid);
        const double g = excess(w);
        if (std::abs(g) <= tol) return {std::move(w), mid};
        (g > 0.0 ? lo : hi) = mid;
    }
    throw NumericalError("solve_beamformer: bisection failed to meet the power tolerance");
}

/// Closed-form w-step for fixed phases: from full-power MRT starts, refresh
/// the (b, f, beta) coefficients for both users and re-solve both
/// beamformers until the sum-rate change falls under tol. A receiver whose
/// composite channel is identically zero is dropped (its transmitter sends
/// nothing and its MMSE weight is the limiting value 0).
inline BeamformerPair optimize_beamformers(const ChannelRealization& ch, const PhaseConfig& theta,
                                           const LinkBudget& budget, const BfConfig& cfg = {}) {
    budget.validate();
    const std::size_t m = static_cast<std::size_t>(ch.m);
    const CVec alpha1 = effective_channel(ch, theta, 1);
    const CVec alpha2 = effective_channel(ch, theta, 2);
    const bool live1 = norm_sq(alpha1) > 0.0;  // receiver 1 reachable (by w2)
    const bool live2 = norm_sq(alpha2) > 0.0;  // receiver 2 reachable (by w1)

    BeamformerPair w = zero_beamformers(ch.m);
    if (!live1 && !live2) return w;

    const double amp = std::sqrt(budget.pmax_w);
    if (live2) w.w1 = scale(conj(alpha2), amp / norm(alpha2));
    if (live1) w.w2 = scale(conj(alpha1), amp / norm(alpha1));

    const double sigma2_extra = cfg.sigma2_in_mmse_weight ? budget.sigma2_w : 0.0;
    double last = sum_rate(ch, theta, w, budget);
    for (int it = 0; it < cfg.max_iter; ++it) {
        const double b1 = std::norm(rowdot(alpha1, w.w2));
        const double b2 = std::norm(rowdot(alpha2, w.w1));
        const double si1 = std::norm(vdot(ch.si_s1, w.w1));
        const double si2 = std::norm(vdot(ch.si_s2, w.w2));
        const double f1 = live1 ? b1 / (b1 * b1 + si1 + sigma2_extra) : 0.0;
        const double f2 = live2 ? b2 / (b2 * b2 + si2 + sigma2_extra) : 0.0;
        if (live1 && !std::isfinite(f1)) {
            throw DegenerateLinkError("optimize_beamformers: zero f denominator on a live link");
        }
        if (live2 && !std::isfinite(f2)) {
            throw DegenerateLinkError("optimize_beamformers: zero f denominator on a live link");
        }

        if (live2) {
            const CVec beta2 = add(scale(alpha2, f2), scale(conj(ch.si_s1), f1));
            w.w1 = solve_beamformer(f2, alpha2, beta2, budget.pmax_w, cfg).w;
        }
        if (live1) {
            const CVec beta1 = add(scale(alpha1, f1), scale(conj(ch.si_s2), f2));
            w.w2 = solve_beamformer(f1, alpha1, beta1, budget.pmax_w, cfg).w;
        }

        const double now = sum_rate(ch, theta, w, budget);
        if (std::abs(now - last) < cfg.tol) break;
        last = now;
    }
    return w;
}

}  // namespace risfd
