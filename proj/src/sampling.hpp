#pragma once

#include <cstdint>

namespace refnoise {

// Counter-based random stream: the state is a pure function of
// (key, counter), so any substream can be opened at any time, on any
// worker, and produce the same values. Mixing is the splitmix64
// finalizer over a Weyl sequence.
class RandomStream {
public:
    RandomStream(std::uint64_t key, std::uint64_t counter);

    std::uint64_t next_u64();
    // Uniform double in [0, 1), 53 significant bits.
    double next_unit();

    // Stable key derivation for nested substreams (per sweep cell, per
    // trial): derive(derive(seed, cell), trial) never aliases a sibling.
    static std::uint64_t derive(std::uint64_t key, std::uint64_t index);

private:
    std::uint64_t state_;
};

// Exact binomial draw: number of successes in n independent trials of
// probability p. Consumes exactly one uniform. Inversion walks outward
// from the distribution mode, so the expected work is O(stddev), not
// O(mean); degenerate p are handled without consuming randomness budget
// beyond the single uniform.
std::int64_t sample_binomial(std::int64_t n, double p, RandomStream& stream);

// Exact hypergeometric draw: overlap of a uniformly random n_draws-subset
// with a fixed n_good-subset of a population. Same mode-centered
// inversion, one uniform per draw.
std::int64_t sample_hypergeometric(std::int64_t population, std::int64_t n_good,
                                   std::int64_t n_draws, RandomStream& stream);

}  // namespace refnoise
