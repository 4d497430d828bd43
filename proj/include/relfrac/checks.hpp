#pragma once

#include <string>
#include <vector>

// The qualitative property checks behind the acceptance gate, shared by
// the acceptance binary and the `check-suite` CLI command. Each check is
// self-contained: it builds its own problem instances and reports a
// single pass/fail verdict plus a human-readable detail line.

namespace relfrac::checks {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // measured numbers vs thresholds
    double seconds = 0.0;
};

CheckResult check_operator_equivalence();   // multiplier vs singular integral
CheckResult check_bessel_asymptotics();     // K_nu closed forms, limits, recurrence
CheckResult check_poisson_normalization();  // int P(.,y) dx = theta(my)
CheckResult check_trace_identity();         // extension trace and energy equality
CheckResult check_bessel_potential();       // G_alpha mass, composition, tail laws
CheckResult check_comparison_kernel();      // resolvent identity, tail, s=1/2 form
CheckResult check_ground_state();           // residual, positivity, multi-start, d_mu
CheckResult check_concentration_sweep();    // c_eps -> d, argmax drift, decay fits
CheckResult check_cutoff_constructions();   // cutoff test function and barycenter limits
CheckResult check_gradient_correctness();   // finite-difference gradient checks

std::vector<CheckResult> run_all_checks();

} // namespace relfrac::checks
