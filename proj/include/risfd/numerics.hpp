#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "risfd/errors.hpp"

namespace risfd {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Dense complex vector. Shapes are checked on every operation; a mismatch
/// throws ShapeError instead of broadcasting.
class CVec {
public:
    CVec() = default;
    explicit CVec(std::size_t n) : entries_(n, Complex{0.0, 0.0}) {}
    explicit CVec(std::vector<Complex> entries) : entries_(std::move(entries)) {}

    std::size_t size() const { return entries_.size(); }
    Complex& operator[](std::size_t i) { return entries_[i]; }
    const Complex& operator[](std::size_t i) const { return entries_[i]; }

    const std::vector<Complex>& entries() const { return entries_; }

    bool operator==(const CVec& other) const { return entries_ == other.entries_; }

private:
    std::vector<Complex> entries_;
};

/// Dense row-major complex matrix.
class CMat {
public:
    CMat() : rows_(0), cols_(0) {}
    CMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Complex{0.0, 0.0}) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<Complex>& entries() const { return entries_; }

private:
    std::size_t rows_, cols_;
    std::vector<Complex> entries_;
};

namespace detail {
inline void require_same_size(const CVec& a, const CVec& b, const char* op) {
    if (a.size() != b.size()) {
        throw ShapeError(std::string(op) + ": size mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
    }
}
}  // namespace detail

/// Hermitian inner product sum conj(a_i) * b_i.
inline Complex vdot(const CVec& a, const CVec& b) {
    detail::require_same_size(a, b, "vdot");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

/// Unconjugated product sum a_i * b_i (row vector applied to a column).
inline Complex rowdot(const CVec& a, const CVec& b) {
    detail::require_same_size(a, b, "rowdot");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double norm_sq(const CVec& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i]);
    return acc;
}

inline double norm(const CVec& a) { return std::sqrt(norm_sq(a)); }

inline CVec conj(const CVec& a) {
    CVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::conj(a[i]);
    return out;
}

inline CVec scale(const CVec& a, Complex s) {
    CVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
    return out;
}

inline CVec add(const CVec& a, const CVec& b) {
    detail::require_same_size(a, b, "add");
    CVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline CVec sub(const CVec& a, const CVec& b) {
    detail::require_same_size(a, b, "sub");
    CVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

/// y = M x.
inline CVec matvec(const CMat& m, const CVec& x) {
    if (m.cols() != x.size()) {
        throw ShapeError("matvec: " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         " applied to length-" + std::to_string(x.size()));
    }
    CVec out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Complex acc{0.0, 0.0};
        for (std::size_t c = 0; c < m.cols(); ++c) acc += m.at(r, c) * x[c];
        out[r] = acc;
    }
    return out;
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Deterministic random stream. A (seed, stream) pair maps to one fixed draw
/// sequence on every platform: the engine is std::mt19937_64 (whose output is
/// pinned by the standard) and all real-valued draws are derived from raw
/// 64-bit words, never from std::*_distribution.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream),
          engine_(detail::splitmix64(detail::splitmix64(seed) ^ stream)) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// Derives an independent child stream; used to give each (episode,
    /// purpose) pair its own reproducible sequence.
    RngStream spawn(std::uint64_t sub) const {
        return RngStream(seed_, detail::splitmix64(stream_ ^ detail::splitmix64(sub + 1)));
    }
    RngStream spawn(std::uint64_t a, std::uint64_t b) const { return spawn(a).spawn(b); }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw DomainError("uniform_index: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t draw;
        do {
            draw = next_u64();
        } while (draw >= limit);
        return draw % n;
    }

    /// Standard normal via Box-Muller; the paired value is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        // (0,1] for the log argument so log(0) cannot occur.
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = kTwoPi * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

private:
    std::uint64_t seed_, stream_;
    std::mt19937_64 engine_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

/// n i.i.d. CN(0, variance) draws: independent real and imaginary parts of
/// variance/2 each.
inline CVec cgauss_sample(RngStream& rng, std::size_t n, double variance) {
    if (variance < 0.0) throw DomainError("cgauss_sample: negative variance");
    const double s = std::sqrt(variance / 2.0);
    CVec out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        out[i] = Complex{s * re, s * im};
    }
    return out;
}

/// Solves (v I + f a a^H) x = b through the rank-one update identity
///   x = b/v - f (a^H b) a / (v (v + f ||a||^2)),
/// which is exact and O(M).
inline CVec solve_rank1_regularized(double v, double f, const CVec& a, const CVec& b) {
    if (v <= 0.0) {
        throw SingularityError("solve_rank1_regularized: v <= 0 leaves the system rank deficient");
    }
    if (f < 0.0) throw DomainError("solve_rank1_regularized: f must be nonnegative");
    detail::require_same_size(a, b, "solve_rank1_regularized");
    const Complex ahb = vdot(a, b);
    const double denom = v * (v + f * norm_sq(a));
    CVec x(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        x[i] = b[i] / v - (f * ahb / denom) * a[i];
    }
    return x;
}

}  // namespace risfd
