#ifndef CHSH_VERIFY_HPP
#define CHSH_VERIFY_HPP

#include <string>
#include <vector>

namespace chsh {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail; // failure description, empty on pass
};

/// Runs the full self-check battery: operator invariants, channel
/// trace/PSD health, the closed-form branch identities, analytic versus
/// full-simulation consistency, feasible-interval endpoints, and a
/// deliberate channel mutation that must be caught by the trace check.
std::vector<SuiteResult> run_verification();

} // namespace chsh

#endif
