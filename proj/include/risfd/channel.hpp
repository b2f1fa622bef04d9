#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "risfd/errors.hpp"
#include "risfd/numerics.hpp"

namespace risfd {

/// Placement of the nodes and surfaces, Fig.-3 style: S1 (BS) at the origin,
/// S2 (UE) at horizontal distance d1, RIS r hanging dv_r above the line at
/// horizontal offset d0r from S1.
struct Geometry {
    double d1 = 50.0;
    double d01 = 1.0;
    double d02 = 49.0;
    double dv1 = 2.0;
    double dv2 = 2.0;

    void validate(bool has_second_ris) const {
        if (!(d01 > 0.0 && d01 < d1)) throw DomainError("Geometry: require 0 < d01 < d1");
        if (has_second_ris && !(d02 > 0.0 && d02 < d1)) {
            throw DomainError("Geometry: require 0 < d02 < d1");
        }
        if (!(dv1 > 0.0) || !(dv2 > 0.0)) throw DomainError("Geometry: require dv1, dv2 > 0");
    }
};

enum class Deployment { SingleRis, DistributedRis };

/// Single RIS keeps all N elements on one surface; distributed splits the
/// same total N across two surfaces.
struct DeploymentScheme {
    Deployment kind = Deployment::SingleRis;
    int total_elements = 0;

    int ris_count() const { return kind == Deployment::SingleRis ? 1 : 2; }
    int per_ris() const { return total_elements / ris_count(); }

    void validate() const {
        if (total_elements <= 0) throw DomainError("DeploymentScheme: N must be positive");
        if (kind == Deployment::DistributedRis && total_elements % 2 != 0) {
            throw DomainError("DeploymentScheme: distributed N must be even");
        }
    }
};

static inline DeploymentScheme single_ris(int n) { return {Deployment::SingleRis, n}; }
static inline DeploymentScheme distributed_ris(int n) { return {Deployment::DistributedRis, n}; }

/// Directed links of the two-node, up-to-two-surface system.
enum class LinkId {
    S1ToR1, S1ToR2, S2ToR1, S2ToR2,   // node -> surface (matrix links)
    R1ToS1, R1ToS2, R2ToS1, R2ToS2,   // surface -> node (vector links)
    S1ToS2, S2ToS1,                   // direct links
    SiAtS1, SiAtS2,                   // self-interference loops
};

struct FadingKind {
    bool rician = false;
    double k_factor = 0.0;  // linear, only meaningful when rician

    static FadingKind rayleigh() { return {false, 0.0}; }
    static FadingKind rician(double k) {
        if (k < 0.0) throw DomainError("Rician factor must be nonnegative");
        return {true, k};
    }
};

enum class ScenarioId { S1, S2, S3 };

/// Total per-link fading map. Scenario 1 keeps every RIS link Rician;
/// scenario 2 drops the LoS of R1->S2; scenario 3 drops S1->R2 (with a
/// config toggle for the R2->S2 reading of the same prose). The direct and
/// self-interference links are Rayleigh in every scenario; the direct-link
/// choice is configurable rather than asserted.
struct Scenario {
    ScenarioId id = ScenarioId::S1;
    double rician_k = 10.0;
    bool s3_blocks_r2_to_s2 = false;
    FadingKind direct_fading = FadingKind::rayleigh();

    FadingKind fading_for(LinkId link) const {
        switch (link) {
            case LinkId::S1ToS2:
            case LinkId::S2ToS1:
                return direct_fading;
            case LinkId::SiAtS1:
            case LinkId::SiAtS2:
                return FadingKind::rayleigh();
            default:
                break;
        }
        if (id == ScenarioId::S2 && link == LinkId::R1ToS2) return FadingKind::rayleigh();
        if (id == ScenarioId::S3) {
            const LinkId blocked = s3_blocks_r2_to_s2 ? LinkId::R2ToS2 : LinkId::S1ToR2;
            if (link == blocked) return FadingKind::rayleigh();
        }
        return FadingKind::rician(rician_k);
    }
};

static inline Scenario scenario(ScenarioId id, double k = 10.0) {
    Scenario s;
    s.id = id;
    s.rician_k = k;
    return s;
}

/// Large-scale model constants. Defaults follow the simulation setup:
/// PL0 = -35.6 dB at 1 m, exponents (4, 2.1, 2.2), SI floor at -95 dB.
struct ChannelParams {
    double pl0_db = -35.6;
    double ref_distance_m = 1.0;
    double zeta_direct = 4.0;
    double zeta_bs_ris = 2.1;
    double zeta_ue_ris = 2.2;
    double si_pl_db = -95.0;
};

/// PL(d) = PL0 - 10 zeta log10(d / D_r), in dB.
inline double path_loss_db(double d, double zeta, const ChannelParams& params = {}) {
    if (d < params.ref_distance_m) {
        throw DomainError("path_loss_db: distance below the reference distance");
    }
    return params.pl0_db - 10.0 * zeta * std::log10(d / params.ref_distance_m);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct LinkDistances {
    double d11, d12, d21, d22, d_direct;
};

/// Euclidean distances of every node-surface pair plus the direct link.
inline LinkDistances link_distances(const Geometry& g) {
    LinkDistances d;
    d.d11 = std::hypot(g.d01, g.dv1);
    d.d12 = std::hypot(g.d02, g.dv2);
    d.d21 = std::hypot(g.d1 - g.d01, g.dv1);
    d.d22 = std::hypot(g.d1 - g.d02, g.dv2);
    d.d_direct = g.d1;
    return d;
}

/// Deterministic LoS construction: uniform linear arrays with half-wavelength
/// spacing at both ends, angles taken from the 2-D geometry.
struct LoSSpec {
    double rx_angle = 0.0;
    double tx_angle = 0.0;
};

/// One small-scale + path-loss draw of a rows x cols link.
/// Rayleigh: sqrt(PL) * CN(0,1). Rician(K): sqrt(PL) * (sqrt(K/(K+1)) LoS +
/// sqrt(1/(K+1)) CN(0,1)) with unit-modulus LoS entries, so the expected
/// per-entry power equals the linear path-loss gain either way.
inline CMat sample_link(RngStream& rng, std::size_t rows, std::size_t cols, double pl_db,
                        const FadingKind& fading, const LoSSpec& los = {}) {
    if (fading.rician && fading.k_factor < 0.0) {
        throw DomainError("sample_link: negative Rician factor");
    }
    const double amp = std::sqrt(db_to_linear(pl_db));
    CMat h(rows, cols);
    const double k = fading.k_factor;
    const double los_w = fading.rician ? std::sqrt(k / (k + 1.0)) : 0.0;
    const double nlos_w = fading.rician ? std::sqrt(1.0 / (k + 1.0)) : 1.0;
    const double sr = std::sin(los.rx_angle);
    const double st = std::sin(los.tx_angle);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            Complex small = nlos_w * cgauss_sample(rng, 1, 1.0)[0];
            if (fading.rician) {
                const double phase = kPi * (static_cast<double>(r) * sr - static_cast<double>(c) * st);
                small += los_w * Complex{std::cos(phase), std::sin(phase)};
            }
            h.at(r, c) = amp * small;
        }
    }
    return h;
}

inline CVec sample_link_vec(RngStream& rng, std::size_t n, double pl_db, const FadingKind& fading,
                            const LoSSpec& los = {}) {
    const CMat m = sample_link(rng, n, 1, pl_db, fading, los);
    CVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = m.at(i, 0);
    return v;
}

/// One drop of every channel coefficient for a deployment scheme and
/// scenario. Vector links are stored as columns; consumers apply the
/// Hermitian transpose where the signal model says h^H.
struct ChannelRealization {
    int m = 0;
    DeploymentScheme scheme;
    std::vector<CMat> s1_to_ris;  // H_{S1 R_r}, per RIS, N_r x M
    std::vector<CMat> s2_to_ris;  // H_{S2 R_r}
    std::vector<CVec> ris_to_s1;  // h_{R_r S1}, length N_r
    std::vector<CVec> ris_to_s2;  // h_{R_r S2}
    CVec s1_to_s2, s2_to_s1;      // direct links, length M
    CVec si_s1, si_s2;            // self-interference loops, length M

    int n_total() const { return scheme.total_elements; }
    int n_per_ris() const { return scheme.per_ris(); }
};

/// Samples all links of one drop. Fixed sampling order keeps a (seed, stream)
/// pair bound to one realization.
inline ChannelRealization realize_drop(RngStream& rng, const Geometry& g,
                                       const DeploymentScheme& scheme, const Scenario& scen,
                                       int m, const ChannelParams& params = {}) {
    scheme.validate();
    g.validate(scheme.ris_count() == 2);
    if (m <= 0) throw DomainError("realize_drop: M must be positive");

    const LinkDistances dist = link_distances(g);
    const int nr = scheme.per_ris();
    const int n_ris = scheme.ris_count();

    // Elevation angles seen from each surface toward each node.
    const double a_r1_s1 = std::atan2(g.dv1, g.d01);
    const double a_r1_s2 = std::atan2(g.dv1, g.d1 - g.d01);
    const double a_r2_s1 = std::atan2(g.dv2, g.d02);
    const double a_r2_s2 = std::atan2(g.dv2, g.d1 - g.d02);

    const double ris_s1_dist[2] = {dist.d11, dist.d12};
    const double ris_s2_dist[2] = {dist.d21, dist.d22};
    const double ris_s1_angle[2] = {a_r1_s1, a_r2_s1};
    const double ris_s2_angle[2] = {a_r1_s2, a_r2_s2};
    const LinkId to_ris[2][2] = {{LinkId::S1ToR1, LinkId::S1ToR2},
                                 {LinkId::S2ToR1, LinkId::S2ToR2}};
    const LinkId from_ris[2][2] = {{LinkId::R1ToS1, LinkId::R1ToS2},
                                   {LinkId::R2ToS1, LinkId::R2ToS2}};

    ChannelRealization ch;
    ch.m = m;
    ch.scheme = scheme;

    for (int r = 0; r < n_ris; ++r) {
        const double pl_s1 = path_loss_db(ris_s1_dist[r], params.zeta_bs_ris, params);
        const double pl_s2 = path_loss_db(ris_s2_dist[r], params.zeta_ue_ris, params);
        ch.s1_to_ris.push_back(sample_link(rng, nr, m, pl_s1, scen.fading_for(to_ris[0][r]),
                                           {ris_s1_angle[r], ris_s1_angle[r]}));
        ch.s2_to_ris.push_back(sample_link(rng, nr, m, pl_s2, scen.fading_for(to_ris[1][r]),
                                           {ris_s2_angle[r], ris_s2_angle[r]}));
        ch.ris_to_s1.push_back(sample_link_vec(rng, nr, pl_s1, scen.fading_for(from_ris[r][0]),
                                               {ris_s1_angle[r], 0.0}));
        ch.ris_to_s2.push_back(sample_link_vec(rng, nr, pl_s2, scen.fading_for(from_ris[r][1]),
                                               {ris_s2_angle[r], 0.0}));
    }

    const double pl_direct = path_loss_db(dist.d_direct, params.zeta_direct, params);
    ch.s1_to_s2 = sample_link_vec(rng, m, pl_direct, scen.fading_for(LinkId::S1ToS2));
    ch.s2_to_s1 = sample_link_vec(rng, m, pl_direct, scen.fading_for(LinkId::S2ToS1));
    ch.si_s1 = sample_link_vec(rng, m, params.si_pl_db, scen.fading_for(LinkId::SiAtS1));
    ch.si_s2 = sample_link_vec(rng, m, params.si_pl_db, scen.fading_for(LinkId::SiAtS2));
    return ch;
}

namespace detail {

inline void dump_block(std::ostream& os, const std::string& name, const CMat& m) {
    os << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    char buf[64];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const Complex& z = m.at(r, c);
            std::snprintf(buf, sizeof buf, "%.17g %.17g", z.real(), z.imag());
            os << buf << (c + 1 < m.cols() ? " " : "");
        }
        os << '\n';
    }
}

inline void dump_block(std::ostream& os, const std::string& name, const CVec& v) {
    CMat m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.at(i, 0) = v[i];
    dump_block(os, name, m);
}

}  // namespace detail

/// Line-oriented channel dump: per link one "<name> <rows> <cols>" header and
/// rows of interleaved real/imag values. Used for oracle cross-checks.
inline void write_channel_dump(std::ostream& os, const ChannelRealization& ch) {
    for (std::size_t r = 0; r < ch.s1_to_ris.size(); ++r) {
        const std::string suffix = std::to_string(r + 1);
        detail::dump_block(os, "s1_to_r" + suffix, ch.s1_to_ris[r]);
        detail::dump_block(os, "s2_to_r" + suffix, ch.s2_to_ris[r]);
        detail::dump_block(os, "r" + suffix + "_to_s1", ch.ris_to_s1[r]);
        detail::dump_block(os, "r" + suffix + "_to_s2", ch.ris_to_s2[r]);
    }
    detail::dump_block(os, "s1_to_s2", ch.s1_to_s2);
    detail::dump_block(os, "s2_to_s1", ch.s2_to_s1);
    detail::dump_block(os, "si_s1", ch.si_s1);
    detail::dump_block(os, "si_s2", ch.si_s2);
}

inline void write_channel_dump(const std::string& path, const ChannelRealization& ch) {
    std::ofstream os(path);
    if (!os) throw IoError(path, "cannot open channel dump for writing");
    write_channel_dump(os, ch);
    if (!os.good()) throw IoError(path, "write failure in channel dump");
}

struct ChannelDumpBlock {
    std::string name;
    CMat values;
};

/// Parses a dump written by write_channel_dump.
inline std::vector<ChannelDumpBlock> read_channel_dump(std::istream& is) {
    std::vector<ChannelDumpBlock> blocks;
    std::string name;
    while (is >> name) {
        std::size_t rows = 0, cols = 0;
        if (!(is >> rows >> cols)) throw ContractError("channel dump: truncated header");
        CMat m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                double re = 0.0, im = 0.0;
                if (!(is >> re >> im)) throw ContractError("channel dump: truncated block");
                m.at(r, c) = Complex{re, im};
            }
        }
        blocks.push_back({name, std::move(m)});
    }
    return blocks;
}

}  // namespace risfd
