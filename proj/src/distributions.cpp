#include "usdeconv/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace usdeconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr std::uint64_t kRejectionCap = 1u << 24;

double phi_difference(double a, double b) {
    // Phi(b) - Phi(a) via complementary erfc; stable in either tail.
    return 0.5 * (std::erfc(a / std::numbers::sqrt2) - std::erfc(b / std::numbers::sqrt2));
}

[[noreturn]] void rejection_exhausted(const char* what) {
    throw std::runtime_error(std::string(what) + ": rejection sampler failed to accept");
}

} // namespace

void validate(const GgdClassParams& p) {
    if (!(p.shape > 0.0) || !(p.shape <= 3.0) || !std::isfinite(p.shape))
        throw std::invalid_argument("ggd: shape must lie in (0, 3]");
    if (!(p.scale > 0.0) || !std::isfinite(p.scale))
        throw std::invalid_argument("ggd: scale must be positive");
}

void validate(const InverseGammaParams& p) {
    if (!(p.shape > 0.0) || !std::isfinite(p.shape) || !(p.scale > 0.0) || !std::isfinite(p.scale))
        throw std::invalid_argument("inverse gamma: shape and scale must be positive");
}

double ggd_log_pdf(double x, const GgdClassParams& p) {
    validate(p);
    const double inv_shape = 1.0 / p.shape;
    return -std::numbers::ln2 - inv_shape * std::log(p.scale) - std::lgamma(1.0 + inv_shape) -
           std::pow(std::fabs(x), p.shape) / p.scale;
}

double standard_normal_sample(RngStream& rng) {
    const double u1 = rng.next_open();
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double gamma_sample(double shape, RngStream& rng) {
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw std::invalid_argument("gamma: shape must be positive");
    if (shape < 1.0) {
        const double boost = std::pow(rng.next_open(), 1.0 / shape);
        return gamma_sample(shape + 1.0, rng) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (std::uint64_t tries = 0; tries < kRejectionCap; ++tries) {
        double x, v;
        do {
            x = standard_normal_sample(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.next_open();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
    rejection_exhausted("gamma");
}

double inverse_gamma_sample(const InverseGammaParams& p, RngStream& rng) {
    validate(p);
    return p.scale / gamma_sample(p.shape, rng);
}

double ggd_sample(const GgdClassParams& p, RngStream& rng) {
    validate(p);
    const double g = gamma_sample(1.0 / p.shape, rng);
    const double magnitude = std::pow(p.scale * g, 1.0 / p.shape);
    return (rng.next_u64() & 1u) ? magnitude : -magnitude;
}

double truncated_normal_sample(double mean, double variance, double lo, double hi,
                               RngStream& rng) {
    if (!(lo < hi)) throw std::invalid_argument("truncated normal: need lo < hi");
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw std::invalid_argument("truncated normal: variance must be positive");
    const double sd = std::sqrt(variance);
    const double a = (lo - mean) / sd;
    const double b = (hi - mean) / sd;
    const double mass = phi_difference(a, b);

    double z = 0.0;
    if (mass >= 0.1) {
        // parent-normal rejection; expected tries <= 10
        for (std::uint64_t tries = 0;; ++tries) {
            if (tries >= kRejectionCap) rejection_exhausted("truncated normal");
            z = standard_normal_sample(rng);
            if (z > a && z < b) break;
        }
    } else if (a >= 0.0 || b <= 0.0) {
        // single-tail interval; work on the right tail by symmetry
        const bool flip = b <= 0.0;
        const double ta = flip ? -b : a;
        const double tb = flip ? -a : b;
        const double lambda = 0.5 * (ta + std::sqrt(ta * ta + 4.0));
        const double tail_mass = 0.5 * std::erfc(ta / std::numbers::sqrt2);
        if (tail_mass > 0.0 && mass / tail_mass >= 0.1) {
            // Robert's translated-exponential proposal, cut at tb
            for (std::uint64_t tries = 0;; ++tries) {
                if (tries >= kRejectionCap) rejection_exhausted("truncated normal");
                const double cand = ta - std::log(rng.next_open()) / lambda;
                if (cand >= tb) continue;
                const double diff = cand - lambda;
                if (std::log(rng.next_open()) <= -0.5 * diff * diff) {
                    z = cand;
                    break;
                }
            }
        } else {
            // narrow far-tail interval: uniform proposal against the density
            for (std::uint64_t tries = 0;; ++tries) {
                if (tries >= kRejectionCap) rejection_exhausted("truncated normal");
                const double cand = ta + (tb - ta) * rng.next_double();
                if (std::log(rng.next_open()) <= 0.5 * (ta * ta - cand * cand)) {
                    z = cand;
                    break;
                }
            }
        }
        if (flip) z = -z;
    } else {
        // narrow interval straddling zero
        for (std::uint64_t tries = 0;; ++tries) {
            if (tries >= kRejectionCap) rejection_exhausted("truncated normal");
            const double cand = a + (b - a) * rng.next_double();
            if (std::log(rng.next_open()) <= -0.5 * cand * cand) {
                z = cand;
                break;
            }
        }
    }
    double x = mean + sd * z;
    // map boundary-rounded draws back into the open interval
    if (x <= lo) x = std::nextafter(lo, hi);
    if (x >= hi) x = std::nextafter(hi, lo);
    return x;
}

double truncated_normal_log_pdf(double x, double mean, double variance, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("truncated normal: need lo < hi");
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw std::invalid_argument("truncated normal: variance must be positive");
    if (x <= lo || x >= hi) return -kInf;
    const double sd = std::sqrt(variance);
    const double a = (lo - mean) / sd;
    const double b = (hi - mean) / sd;
    const double mass = phi_difference(a, b);
    if (!(mass > 0.0)) return -kInf;
    const double z = (x - mean) / sd;
    return -0.5 * z * z - kHalfLog2Pi - std::log(sd) - std::log(mass);
}

std::size_t categorical_sample(std::span<const double> weights, RngStream& rng) {
    if (weights.empty()) throw std::invalid_argument("categorical: empty weight vector");
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("categorical: weights must be finite and nonnegative");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("categorical: weights must sum to 1");
    const double u = rng.next_double();
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] > 0.0) last_positive = i;
        cum += weights[i];
        if (u < cum) return i;
    }
    return last_positive;
}

int uniform_int_sample(int lo, int hi, RngStream& rng) {
    if (lo > hi) throw std::invalid_argument("uniform int: need lo <= hi");
    const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    const std::uint64_t threshold = (~range + 1) % range; // 2^64 mod range
    std::uint64_t x;
    do {
        x = rng.next_u64();
    } while (x < threshold);
    return lo + static_cast<int>(x % range);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

} // namespace usdeconv
