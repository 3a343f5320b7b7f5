#pragma once

#include <string>

#include "experiments.hpp"

namespace refnoise {

// Rates on every user-facing surface accept percent or fraction: a value
// above 1 is a percent. Exactly 1 means the fraction 1.0.
double normalize_rate(double raw);

// Parses the flat key/value sweep configuration format:
//
//   # experiment 3
//   n_total  = 10000
//   prevalence = 10        # repeated keys form lists
//   prevalence = 30
//   model    = 95 95       # sensitivity then specificity
//   ref_lo   = 90
//   ref_hi   = 100
//   ref_step = 1
//   trials   = 5000
//   seed     = 42
//   mc       = on
//
// Rates follow the percent-or-fraction rule; ref_step is read in the
// same unit as ref_lo/ref_hi. Unknown keys, malformed numbers and wrong
// arities are rejected with the line number and field named.
SweepSpec parse_sweep_config(const std::string& text);
SweepSpec load_sweep_config(const std::string& path);

}  // namespace refnoise
