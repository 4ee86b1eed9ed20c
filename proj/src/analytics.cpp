#include "chsh/analytics.hpp"

#include "chsh/qmath.hpp" // numeric_error

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chsh {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_k(double k) {
    if (!(k > 0.0 && k <= 1.0))
        throw std::invalid_argument("K must lie in (0, 1]");
}

void check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= kPi / 2.0 + 1e-12))
        throw std::invalid_argument("theta must lie in [0, pi/2]");
}

void check_p(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("p must lie in [0, 1]");
}

// Free-angle closed forms used by the optimizer.
double free_s1(double theta1, double theta2, double p, double k) {
    return p * 2.0 * (std::cos(theta1) + k * std::sin(theta1)) +
           (1.0 - p) * 2.0 * k * std::sin(theta2);
}

double free_s2(double theta1, double theta2, double p, double k) {
    return p * (std::cos(theta1) + k * std::sin(theta1)) +
           (1.0 - p) * (2.0 * k * std::sin(theta2) + std::cos(theta2));
}

// Root of the affine function f on [lo, hi], assuming a sign change.
template <typename F>
double bisect(F f, double lo, double hi, double tol) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double bound_s1_case1(double theta, double k) {
    check_theta(theta);
    check_k(k);
    return 2.0 * (std::cos(theta) + k * std::sin(theta));
}

double bound_s2_case1(double theta, double k) { return bound_s1_case1(theta, k) / 2.0; }

double bound_s1_case2(double theta, double k) {
    check_theta(theta);
    check_k(k);
    return 2.0 * k * std::sin(theta);
}

double bound_s2_case2(double theta, double k) {
    check_theta(theta);
    check_k(k);
    return 2.0 * k * std::sin(theta) + std::cos(theta);
}

double tradeoff_case2(double s1_hat, double k) {
    check_k(k);
    if (!(s1_hat >= 0.0 && s1_hat <= 2.0 * k + 1e-12))
        throw std::invalid_argument("tradeoff_case2: s1_hat must lie in [0, 2K]");
    const double rad = std::max(0.0, 4.0 * k * k - s1_hat * s1_hat);
    return s1_hat + std::sqrt(rad) / (2.0 * k);
}

OptimalAngle optimal_theta(int which_case, double k) {
    check_k(k);
    switch (which_case) {
        case 1:
            return OptimalAngle{std::atan(k), 2.0 * std::sqrt(1.0 + k * k)};
        case 2:
            return OptimalAngle{std::atan(2.0 * k), std::sqrt(4.0 * k * k + 1.0)};
        default:
            throw std::invalid_argument("optimal_theta: case must be 1 or 2");
    }
}

MixedScores mixed_scores(double p, double k) {
    check_p(p);
    check_k(k);
    const double s1_c1 = 2.0 * std::sqrt(1.0 + k * k);
    const double s1_c2 = 4.0 * k * k / std::sqrt(4.0 * k * k + 1.0);
    const double s2_c1 = std::sqrt(1.0 + k * k);
    const double s2_c2 = std::sqrt(4.0 * k * k + 1.0);
    return MixedScores{p * s1_c1 + (1.0 - p) * s1_c2, p * s2_c1 + (1.0 - p) * s2_c2};
}

FeasibleInterval feasible_interval(double k) {
    check_k(k);
    const double a1 = 2.0 * std::sqrt(1.0 + k * k);             // S1 at p=1
    const double a2 = 4.0 * k * k / std::sqrt(4.0 * k * k + 1.0); // S1 at p=0
    const double b1 = std::sqrt(1.0 + k * k);                   // S2 at p=1
    const double b2 = std::sqrt(4.0 * k * k + 1.0);             // S2 at p=0

    FeasibleInterval out;
    out.p_low = (2.0 - a2) / (a1 - a2);
    out.p_high = (b2 - 2.0) / (b2 - b1);
    out.nonempty = out.p_low >= 0.0 && out.p_low < out.p_high && out.p_high <= 1.0;

    // bisection cross-check of the closed forms
    const double xlow = bisect([=](double p) { return mixed_scores(p, k).s1 - 2.0; }, 0.0, 1.0, 1e-13);
    if (std::abs(xlow - out.p_low) > 1e-12)
        throw numeric_error("feasible_interval: p_low cross-check failed");
    if (b2 > 2.0) {
        const double xhigh =
            bisect([=](double p) { return mixed_scores(p, k).s2 - 2.0; }, 0.0, 1.0, 1e-13);
        if (std::abs(xhigh - out.p_high) > 1e-12)
            throw numeric_error("feasible_interval: p_high cross-check failed");
    }
    return out;
}

double critical_k() {
    // p_low - p_high is positive at small K and negative at K = 1
    double lo = 0.5;
    double hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const FeasibleInterval fi = feasible_interval(mid);
        if (fi.p_low - fi.p_high > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

OptimizerResult optimize_min_violation(double k, int grid) {
    check_k(k);
    if (grid < 8)
        throw std::invalid_argument("optimize_min_violation: grid must be at least 8");

    double t1_lo = 0.0, t1_hi = kPi / 2.0;
    double t2_lo = 0.0, t2_hi = kPi / 2.0;
    double p_lo = 0.0, p_hi = 1.0;

    OptimizerResult best{0.0, 0.0, 0.0, -1.0};
    for (int round = 0; round < 3; ++round) {
        for (int i1 = 0; i1 <= grid; ++i1) {
            const double t1 = t1_lo + (t1_hi - t1_lo) * i1 / grid;
            for (int i2 = 0; i2 <= grid; ++i2) {
                const double t2 = t2_lo + (t2_hi - t2_lo) * i2 / grid;
                for (int ip = 0; ip <= grid; ++ip) {
                    const double p = p_lo + (p_hi - p_lo) * ip / grid;
                    const double score =
                        std::min(free_s1(t1, t2, p, k), free_s2(t1, t2, p, k));
                    if (score > best.min_score)
                        best = OptimizerResult{t1, t2, p, score};
                }
            }
        }
        // shrink each range tenfold around the incumbent
        const double w1 = (t1_hi - t1_lo) / 20.0;
        const double w2 = (t2_hi - t2_lo) / 20.0;
        const double wp = (p_hi - p_lo) / 20.0;
        t1_lo = std::max(0.0, best.theta1 - w1);
        t1_hi = std::min(kPi / 2.0, best.theta1 + w1);
        t2_lo = std::max(0.0, best.theta2 - w2);
        t2_hi = std::min(kPi / 2.0, best.theta2 + w2);
        p_lo = std::max(0.0, best.p - wp);
        p_hi = std::min(1.0, best.p + wp);
    }
    return best;
}

} // namespace chsh
