#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "risfd/channel.hpp"
#include "risfd/errors.hpp"
#include "risfd/numerics.hpp"

namespace risfd {

/// Wraps a finite angle into [-pi, pi). Kept as conditional +-2*pi steps so
/// that a shift by the exact double 2*pi is undone bit-for-bit.
inline double wrap_phase(double x) {
    if (!std::isfinite(x)) throw DomainError("wrap_phase: non-finite phase");
    if (x >= 4.0 * kTwoPi || x < -4.0 * kTwoPi) {
        x = std::remainder(x, kTwoPi);
    }
    while (x >= kPi) x -= kTwoPi;
    while (x < -kPi) x += kTwoPi;
    return x;
}

/// RIS phase-shift vector, grouped per surface, normalized to [-pi, pi) on
/// construction.
class PhaseConfig {
public:
    PhaseConfig() = default;
    explicit PhaseConfig(std::vector<double> phases) : phases_(std::move(phases)) {
        for (double& p : phases_) p = wrap_phase(p);
    }

    std::size_t size() const { return phases_.size(); }
    double operator[](std::size_t i) const { return phases_[i]; }
    const std::vector<double>& phases() const { return phases_; }

    bool operator==(const PhaseConfig& other) const { return phases_ == other.phases_; }

private:
    std::vector<double> phases_;
};

inline PhaseConfig random_phases(RngStream& rng, std::size_t n) {
    std::vector<double> p(n);
    for (double& x : p) x = rng.uniform(-kPi, kPi);
    return PhaseConfig(std::move(p));
}

struct LinkBudget {
    double sigma2_w = 1e-11;   // -80 dBm
    double pmax_w = 0.0316227766016838;  // 15 dBm

    void validate() const {
        if (!(sigma2_w > 0.0)) throw DomainError("LinkBudget: sigma2 must be positive");
        if (!(pmax_w > 0.0)) throw DomainError("LinkBudget: P_max must be positive");
    }
};

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

struct BeamformerPair {
    CVec w1, w2;
};

inline BeamformerPair zero_beamformers(int m) {
    return {CVec(static_cast<std::size_t>(m)), CVec(static_cast<std::size_t>(m))};
}

/// Power-constraint check, ||w_i||^2 <= P_max + 1e-8.
inline bool power_feasible(const BeamformerPair& w, const LinkBudget& budget,
                           double slack = 1e-8) {
    return norm_sq(w.w1) <= budget.pmax_w + slack && norm_sq(w.w2) <= budget.pmax_w + slack;
}

/// Composite row channel seen at receiver S_i:
///   alpha_i = sum_r h^H_{R_r S_i} Theta_r H_{S_ibar R_r} + h^H_{S_ibar S_i},
/// the row vector that multiplies the other node's beamformer.
inline CVec effective_channel(const ChannelRealization& ch, const PhaseConfig& theta,
                              int receiver) {
    if (receiver != 1 && receiver != 2) throw DomainError("effective_channel: receiver is 1 or 2");
    if (static_cast<int>(theta.size()) != ch.n_total()) {
        throw ShapeError("effective_channel: phase count does not match element count");
    }
    const std::size_t m = static_cast<std::size_t>(ch.m);
    const std::vector<CVec>& to_rx = (receiver == 1) ? ch.ris_to_s1 : ch.ris_to_s2;
    const std::vector<CMat>& from_tx = (receiver == 1) ? ch.s2_to_ris : ch.s1_to_ris;
    const CVec& direct = (receiver == 1) ? ch.s2_to_s1 : ch.s1_to_s2;

    CVec alpha(m);
    const std::size_t nr = static_cast<std::size_t>(ch.n_per_ris());
    std::size_t offset = 0;
    for (std::size_t r = 0; r < to_rx.size(); ++r, offset += nr) {
        const CVec& h = to_rx[r];
        const CMat& big_h = from_tx[r];
        if (h.size() != nr || big_h.rows() != nr || big_h.cols() != m) {
            throw ShapeError("effective_channel: inconsistent realization shapes");
        }
        for (std::size_t n = 0; n < nr; ++n) {
            const double phi = theta[offset + n];
            const Complex factor = std::conj(h[n]) * Complex{std::cos(phi), std::sin(phi)};
            for (std::size_t c = 0; c < m; ++c) alpha[c] += factor * big_h.at(n, c);
        }
    }
    for (std::size_t c = 0; c < m; ++c) alpha[c] += std::conj(direct[c]);
    return alpha;
}

/// SINR at receiver S_i: |alpha_i w_ibar|^2 / (|h^H_{S_i S_i} w_i|^2 + sigma^2).
inline double sinr(const ChannelRealization& ch, const PhaseConfig& theta,
                   const BeamformerPair& w, const LinkBudget& budget, int receiver) {
    budget.validate();
    const CVec alpha = effective_channel(ch, theta, receiver);
    const CVec& w_tx = (receiver == 1) ? w.w2 : w.w1;
    const CVec& w_own = (receiver == 1) ? w.w1 : w.w2;
    const CVec& si = (receiver == 1) ? ch.si_s1 : ch.si_s2;
    const double signal = std::norm(rowdot(alpha, w_tx));
    const double self_interference = std::norm(vdot(si, w_own));
    return signal / (self_interference + budget.sigma2_w);
}

/// Achievable rate log2(1 + gamma) in bps/Hz.
inline double rate(double gamma) {
    if (gamma < 0.0) throw DomainError("rate: negative SINR");
    return std::log1p(gamma) / std::log(2.0);
}

inline double sum_rate(const ChannelRealization& ch, const PhaseConfig& theta,
                       const BeamformerPair& w, const LinkBudget& budget) {
    return rate(sinr(ch, theta, w, budget, 1)) + rate(sinr(ch, theta, w, budget, 2));
}

}  // namespace risfd
