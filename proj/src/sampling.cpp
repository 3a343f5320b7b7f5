#include "sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace refnoise {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double log_choose(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t key, std::uint64_t counter)
    : state_(mix64(key + kGolden * counter)) {}

std::uint64_t RandomStream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double RandomStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::derive(std::uint64_t key, std::uint64_t index) {
    return mix64(key + kGolden * (index + 1));
}

namespace {

// Inversion over a discrete unimodal pmf, walking outward from the mode.
// `ratio_up(k)` returns pmf(k+1)/pmf(k); `ratio_down(k)` returns
// pmf(k-1)/pmf(k). One uniform decides the whole draw. If accumulated
// rounding leaves a sliver of u unconsumed after the full support
// (probability ~1e-15), the mode is returned.
template <typename RatioUp, typename RatioDown>
std::int64_t chopdown(std::int64_t lo, std::int64_t hi, std::int64_t mode, double pmf_at_mode,
                      double u, RatioUp ratio_up, RatioDown ratio_down) {
    u -= pmf_at_mode;
    if (u < 0.0) return mode;
    std::int64_t k_up = mode, k_down = mode;
    double p_up = pmf_at_mode, p_down = pmf_at_mode;
    while (k_up < hi || k_down > lo) {
        if (k_up < hi) {
            p_up *= ratio_up(k_up);
            ++k_up;
            u -= p_up;
            if (u < 0.0) return k_up;
        }
        if (k_down > lo) {
            p_down *= ratio_down(k_down);
            --k_down;
            u -= p_down;
            if (u < 0.0) return k_down;
        }
    }
    return mode;
}

}  // namespace

std::int64_t sample_binomial(std::int64_t n, double p, RandomStream& stream) {
    if (n < 0 || !(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("sample_binomial: need n >= 0 and p in [0, 1]");
    }
    const double u = stream.next_unit();  // always one uniform per draw
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;

    const double q = 1.0 - p;
    const double nd = static_cast<double>(n);
    std::int64_t mode = static_cast<std::int64_t>(std::floor((nd + 1.0) * p));
    if (mode > n) mode = n;
    const double md = static_cast<double>(mode);
    const double log_pm = log_choose(nd, md) + md * std::log(p) + (nd - md) * std::log1p(-p);

    return chopdown(
        0, n, mode, std::exp(log_pm), u,
        [&](std::int64_t k) {
            return (nd - static_cast<double>(k)) * p / ((static_cast<double>(k) + 1.0) * q);
        },
        [&](std::int64_t k) {
            return static_cast<double>(k) * q / ((nd - static_cast<double>(k) + 1.0) * p);
        });
}

std::int64_t sample_hypergeometric(std::int64_t population, std::int64_t n_good,
                                   std::int64_t n_draws, RandomStream& stream) {
    if (population < 0 || n_good < 0 || n_good > population || n_draws < 0 ||
        n_draws > population) {
        throw std::invalid_argument("sample_hypergeometric: inconsistent population");
    }
    const double u = stream.next_unit();
    const std::int64_t lo = std::max<std::int64_t>(0, n_draws + n_good - population);
    const std::int64_t hi = std::min(n_draws, n_good);
    if (lo == hi) return lo;

    const double N = static_cast<double>(population);
    const double K = static_cast<double>(n_good);
    const double n = static_cast<double>(n_draws);
    std::int64_t mode = static_cast<std::int64_t>(std::floor((n + 1.0) * (K + 1.0) / (N + 2.0)));
    if (mode < lo) mode = lo;
    if (mode > hi) mode = hi;
    const double md = static_cast<double>(mode);
    const double log_pm =
        log_choose(K, md) + log_choose(N - K, n - md) - log_choose(N, n);

    return chopdown(
        lo, hi, mode, std::exp(log_pm), u,
        [&](std::int64_t ki) {
            const double k = static_cast<double>(ki);
            return (K - k) * (n - k) / ((k + 1.0) * (N - K - n + k + 1.0));
        },
        [&](std::int64_t ki) {
            const double k = static_cast<double>(ki);
            return k * (N - K - n + k) / ((K - k + 1.0) * (n - k + 1.0));
        });
}

}  // namespace refnoise
