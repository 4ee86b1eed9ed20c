#ifndef CHSH_ANALYTICS_HPP
#define CHSH_ANALYTICS_HPP

#include <utility>

namespace chsh {

/// p-range over which both observers' mixed lower bounds exceed 2.
struct FeasibleInterval {
    double p_low = 0.0;
    double p_high = 0.0;
    bool nonempty = false;
};

struct OptimalAngle {
    double theta = 0.0;
    double value = 0.0;
};

struct MixedScores {
    double s1 = 0.0;
    double s2 = 0.0;
};

struct OptimizerResult {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double p = 0.0;
    double min_score = 0.0;
};

/// Strict-violation threshold: S counts as violating only above 2 + 1e-12.
inline constexpr double kViolationEps = 1e-12;

// Closed-form branch bounds as functions of theta and K.
double bound_s1_case1(double theta, double k);
double bound_s2_case1(double theta, double k); // exactly half of s1_case1
double bound_s1_case2(double theta, double k);
double bound_s2_case2(double theta, double k);

/// Second-observer bound as a function of the first observer's bound in
/// the lambda=2 branch: s1_hat + sqrt(4K^2 - s1_hat^2) / (2K).
double tradeoff_case2(double s1_hat, double k);

/// Case 1 maximizes the first observer's bound at arctan K; case 2
/// maximizes the second observer's bound at arctan 2K.
OptimalAngle optimal_theta(int which_case, double k);

/// Mixed lower bounds with each branch at its own optimal angle.
MixedScores mixed_scores(double p, double k);

FeasibleInterval feasible_interval(double k);

/// Smallest K with a nonempty feasible interval, by bisection to 1e-10.
double critical_k();

/// Deterministic grid search (plus two 10x local refinements) over
/// (theta1, theta2, p) maximizing min(S1, S2) of the free-angle closed
/// forms. Ties break toward smaller theta1, then theta2, then p.
OptimizerResult optimize_min_violation(double k, int grid);

} // namespace chsh

#endif
