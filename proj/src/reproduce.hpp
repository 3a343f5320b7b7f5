#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace refnoise {

// Seed behind the Monte Carlo verification checks. Analytic checks are
// seed-free; the stochastic ones are pinned so the battery is a
// deterministic pass/fail gate.
inline constexpr std::uint64_t kVerifySeed = 42;

struct CheckResult {
    std::string name;
    double expected;
    double actual;
    double tolerance;
    bool pass;
    std::string detail;  // optional context, empty when self-explanatory
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;  // documented discrepancies; informational only

    int failed() const;
    bool all_pass() const { return failed() == 0; }
};

// Recomputes the battery of known-good values and contracts this engine
// is expected to satisfy: exact worst-case metrics, error-range extrema,
// prevalence-collapse values, oracle equivalence on every small integer
// configuration, the Monte Carlo determinism/convergence/envelope
// contracts, and the mirror symmetry property. Also collects the
// documented discrepancy notes for quoted values this engine cannot
// reproduce; those are reported, never asserted.
VerificationReport run_verification(std::uint64_t mc_seed = kVerifySeed);

// One line per check (status, expected/actual/tolerance) plus the notes.
std::string format_verification(const VerificationReport& report);

}  // namespace refnoise
