#pragma once

#include <cmath>
#include <stdexcept>

#include "types.hpp"

namespace refnoise {

// Splits n_total cases into ground-truth strata at the given prevalence.
// The positive stratum is rounded half-away-from-zero once; the negative
// stratum is the exact complement, so the total is always preserved.
inline Cohort make_cohort(std::int64_t n_total, Fraction prevalence) {
    if (n_total < 1) {
        throw std::invalid_argument("n_total: must be at least 1");
    }
    const auto n_positive =
        static_cast<std::int64_t>(std::llround(prevalence.value() * static_cast<double>(n_total)));
    return Cohort(n_positive, n_total - n_positive);
}

}  // namespace refnoise
