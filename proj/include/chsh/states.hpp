#ifndef CHSH_STATES_HPP
#define CHSH_STATES_HPP

#include "chsh/qmath.hpp"

#include <nlohmann/json_fwd.hpp>
#include <vector>

namespace chsh {

/// Schmidt coefficients (non-increasing, unit sum of squares) plus the
/// two local dimensions. Fully describes the shared pure state.
struct SchmidtSpec {
    std::vector<double> coeffs; // length dim_a
    int dim_a = 0;              // s, with s <= t
    int dim_b = 0;              // t
};

struct StateVector {
    int dim = 0;
    std::vector<cxd> amps;
};

/// Unit-trace Hermitian PSD matrix on the joint space.
struct DensityOperator {
    int dim = 0;
    CMatrix matrix;
};

/// Builds a SchmidtSpec from raw weights: pads with zeros up to dim_a,
/// sorts non-increasing, and normalizes the sum of squares to 1. In
/// strict mode a normalization off by more than 1e-9 is an error.
SchmidtSpec make_spec(std::vector<double> weights, int dim_a, int dim_b, bool strict = false);

/// |psi> = sum_i c_i |i>|i>, embedded on the computational bases with
/// Bob's support on his first s basis states.
StateVector pure_state(const SchmidtSpec& spec);

DensityOperator density(const SchmidtSpec& spec);

/// Validates the DensityOperator invariants (Hermitian, trace 1, PSD);
/// throws numeric_error on failure.
void validate_density(const DensityOperator& rho);

/// K = 2 * sum over coefficient pairs (c1c2 + c3c4 + ...); the last
/// coefficient stays unpaired when dim_a is odd. K in [0, 1].
double k_param(const SchmidtSpec& spec);

/// D = sum over pairs of (c_odd^2 - c_even^2), plus the trailing c_s^2
/// when dim_a is odd. Non-negative under the descending-order invariant.
double pair_slack(const SchmidtSpec& spec);

void to_json(nlohmann::json& j, const SchmidtSpec& spec);
void from_json(const nlohmann::json& j, SchmidtSpec& spec);

} // namespace chsh

#endif
