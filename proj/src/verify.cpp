#include "chsh/verify.hpp"

#include "chsh/analytics.hpp"
#include "chsh/measurements.hpp"
#include "chsh/qmath.hpp"
#include "chsh/sequential.hpp"
#include "chsh/states.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace chsh {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Check {
    std::ostringstream fail;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            fail << what;
        }
    }
    void expect_near(double got, double want, double tol, const std::string& what) {
        expect(std::abs(got - want) <= tol,
               what + ": got " + std::to_string(got) + ", want " + std::to_string(want));
    }
};

SchmidtSpec equal_pair_spec(int s) {
    // equal adjacent pairs, distinct across pairs, K = 1 only when uniform
    std::vector<double> w;
    for (int i = 0; i < s; i += 2) {
        const double v = 1.0 + 0.25 * i;
        w.push_back(v);
        if (i + 1 < s) w.push_back(v);
    }
    return make_spec(w, s, s);
}

SchmidtSpec uniform_spec(int s) {
    return make_spec(std::vector<double>(s, 1.0), s, s);
}

SuiteResult run_suite(const std::string& name, const std::function<void(Check&)>& body) {
    Check c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.fail.str(std::string("exception: ") + e.what());
    }
    return SuiteResult{name, c.ok, c.fail.str()};
}

void suite_operators(Check& c) {
    for (int d : {2, 3, 4, 5, 6, 8}) {
        for (double theta : {0.0, 0.4, kPi / 4.0, kPi / 2.0}) {
            const auto alice = alice_observables(d, theta);
            c.expect((alice.a0.matrix * alice.a0.matrix)
                             .max_abs_diff(CMatrix::identity(d)) <= 1e-10,
                     "A0 not dichotomic at d=" + std::to_string(d));
            const PairSet c1 = bob_pairs_case1(d);
            const PairSet c2 = bob_pairs_case2(d);
            for (const ProjectivePair* p : {&c1.y0, &c1.y1, &c2.y0, &c2.y1}) {
                c.expect((p->p0 * p->p0).max_abs_diff(p->p0) <= 1e-10, "projector not idempotent");
                c.expect((p->p0 + p->p1).max_abs_diff(CMatrix::identity(d)) <= 1e-12,
                         "pair not complete");
            }
            const auto b2 = bob2_observables_case2(d);
            c.expect((b2.a1.matrix * b2.a1.matrix).max_abs_diff(CMatrix::identity(d)) <= 1e-10,
                     "second-observer observable not dichotomic");
        }
    }
}

void suite_channel_health(Check& c) {
    for (int d : {2, 3, 4, 5, 6, 8}) {
        const SchmidtSpec spec = uniform_spec(d);
        const auto [t1, t2] = default_angles(spec);
        const ScenarioConfig cfg{spec, default_bundle(spec, t1, t2, 0.25), 3};
        const ChshReport rep = run_scenario(cfg);
        for (const auto* branch : {&rep.branch1, &rep.branch2})
            for (const StageRecord& st : *branch) {
                c.expect_near(st.trace_after, 1.0, 1e-12, "trace drift at d=" + std::to_string(d));
                c.expect(st.min_eig_after >= -1e-10, "PSD loss at d=" + std::to_string(d));
            }
    }
}

void suite_branch_closed_forms(Check& c) {
    for (int s : {2, 4, 6, 8}) {
        const SchmidtSpec spec = equal_pair_spec(s);
        const double k = k_param(spec);
        for (int i = 0; i <= 12; ++i) {
            const double theta = kPi / 2.0 * i / 12.0;
            const ScenarioConfig cfg{spec, default_bundle(spec, theta, theta, 0.5), 2};
            const ChshReport rep = run_scenario(cfg);
            c.expect_near(rep.branch1[0].s_value, 2.0 * (std::cos(theta) + k * std::sin(theta)),
                          1e-9, "case-(i) first-observer closed form");
            c.expect_near(rep.branch1[1].s_value, 0.5 * rep.branch1[0].s_value, 1e-9,
                          "case-(i) halving");
            c.expect_near(rep.branch2[0].s_value,
                          2.0 * k * std::sin(theta) + 2.0 * std::cos(theta) * pair_slack(spec),
                          1e-9, "case-(ii) first-observer closed form");
            c.expect_near(rep.branch2[1].s_value, std::cos(theta) + 2.0 * k * std::sin(theta),
                          1e-9, "case-(ii) second-observer closed form");
        }
    }
}

void suite_eq8_eq9(Check& c) {
    for (int ik = 1; ik <= 10; ++ik) {
        const double k = ik / 10.0;
        for (int i = 0; i < 1000; ++i) {
            const double theta = kPi / 2.0 * i / 999.0;
            c.expect(bound_s2_case1(theta, k) == bound_s1_case1(theta, k) / 2.0,
                     "halving identity");
            const double residual =
                tradeoff_case2(bound_s1_case2(theta, k), k) - bound_s2_case2(theta, k);
            c.expect(std::abs(residual) <= 1e-12, "trade-off identity residual");
        }
    }
}

void suite_analytic_vs_simulation(Check& c) {
    for (int s : {2, 4, 6, 8}) {
        const SchmidtSpec spec = uniform_spec(s); // pair_slack = 0, K = 1
        const double k = k_param(spec);
        const auto [t1, t2] = default_angles(spec);
        for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const ChshReport rep = run_scenario({spec, default_bundle(spec, t1, t2, p), 2});
            const MixedScores ms = mixed_scores(p, k);
            c.expect_near(rep.mixed[0], ms.s1, 1e-9, "mixed S1 vs closed form");
            c.expect_near(rep.mixed[1], ms.s2, 1e-9, "mixed S2 vs closed form");
        }
    }
    // slack > 0: simulation dominates the lower bound
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int s = 2 * (1 + static_cast<int>(rng() % 3));
        std::vector<double> w(s);
        for (double& x : w) x = u(rng);
        const SchmidtSpec spec = make_spec(w, s, s);
        const double k = k_param(spec);
        if (k <= 0.0) continue;
        const auto [t1, t2] = default_angles(spec);
        for (double p : {0.25, 0.5}) {
            const ChshReport rep = run_scenario({spec, default_bundle(spec, t1, t2, p), 2});
            const MixedScores ms = mixed_scores(p, k);
            c.expect(rep.mixed[0] >= ms.s1 - 1e-9, "simulated S1 below its lower bound");
        }
    }
}

void suite_feasible_interval(Check& c) {
    const FeasibleInterval k1 = feasible_interval(1.0);
    c.expect(k1.nonempty, "K=1 interval empty");
    c.expect_near(k1.p_low, (2.0 * std::sqrt(5.0) - 4.0) / (2.0 * std::sqrt(10.0) - 4.0), 1e-10,
                  "K=1 lower endpoint");
    c.expect_near(k1.p_high, (std::sqrt(5.0) - 2.0) / (std::sqrt(5.0) - std::sqrt(2.0)), 1e-10,
                  "K=1 upper endpoint");
    for (double k : {0.99, 1.0}) {
        const FeasibleInterval fi = feasible_interval(k);
        c.expect_near(mixed_scores(fi.p_low, k).s1, 2.0, 1e-10, "S1 at p_low");
        c.expect_near(mixed_scores(fi.p_high, k).s2, 2.0, 1e-10, "S2 at p_high");
    }
    c.expect(!feasible_interval(0.5).nonempty, "K=0.5 should be infeasible");
    const double kc = critical_k();
    c.expect(kc > 0.97 && kc < 0.98, "critical K out of expected range");
}

void suite_mutation(Check& c) {
    // dropping the 1/2 input average must trip the trace check
    const SchmidtSpec spec = uniform_spec(2);
    const DensityOperator rho = density(spec);
    const PairSet pairs = bob_pairs_case1(2);
    bool caught = false;
    try {
        (void)luders_update(rho, pairs, spec.dim_a, /*input_weight=*/1.0);
    } catch (const numeric_error&) {
        caught = true;
    }
    c.expect(caught, "mutated channel slipped past the trace check");
}

} // namespace

std::vector<SuiteResult> run_verification() {
    return {
        run_suite("operator-validity", suite_operators),
        run_suite("channel-trace-psd", suite_channel_health),
        run_suite("branch-closed-forms", suite_branch_closed_forms),
        run_suite("eq8-eq9-identities", suite_eq8_eq9),
        run_suite("analytic-vs-simulation", suite_analytic_vs_simulation),
        run_suite("feasible-interval", suite_feasible_interval),
        run_suite("mutation-sensitivity", suite_mutation),
    };
}

} // namespace chsh
