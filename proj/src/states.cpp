#include "chsh/states.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

namespace chsh {

SchmidtSpec make_spec(std::vector<double> weights, int dim_a, int dim_b, bool strict) {
    if (dim_a < 1 || dim_b < 1)
        throw std::invalid_argument("make_spec: dimensions must be positive");
    if (dim_a > dim_b)
        throw std::invalid_argument("make_spec: dim_a must not exceed dim_b");
    if (static_cast<long>(dim_a) * dim_b > kDimCap)
        throw std::invalid_argument("make_spec: joint dimension exceeds cap");
    if (weights.empty() || static_cast<int>(weights.size()) > dim_a)
        throw std::invalid_argument("make_spec: weight count must be in [1, dim_a]");

    double sq = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0))
            throw std::invalid_argument("make_spec: weights must be non-negative");
        sq += w * w;
    }
    if (sq <= 0.0)
        throw std::invalid_argument("make_spec: at least one weight must be positive");
    if (strict && std::abs(sq - 1.0) > 1e-9)
        throw std::invalid_argument("make_spec: weights not normalized (strict mode)");

    weights.resize(dim_a, 0.0);
    std::sort(weights.begin(), weights.end(), std::greater<double>());
    const double norm = std::sqrt(sq);
    for (double& w : weights) w /= norm;

    return SchmidtSpec{std::move(weights), dim_a, dim_b};
}

StateVector pure_state(const SchmidtSpec& spec) {
    StateVector psi;
    psi.dim = spec.dim_a * spec.dim_b;
    psi.amps.assign(psi.dim, cxd{0.0, 0.0});
    for (int i = 0; i < spec.dim_a; ++i)
        psi.amps[static_cast<size_t>(i) * spec.dim_b + i] = spec.coeffs[i];
    return psi;
}

DensityOperator density(const SchmidtSpec& spec) {
    const StateVector psi = pure_state(spec);
    CMatrix rho(psi.dim, psi.dim);
    for (int i = 0; i < psi.dim; ++i) {
        if (psi.amps[i] == cxd{0.0, 0.0}) continue;
        for (int j = 0; j < psi.dim; ++j)
            rho(i, j) = psi.amps[i] * std::conj(psi.amps[j]);
    }
    DensityOperator out{psi.dim, std::move(rho)};
    validate_density(out);
    return out;
}

void validate_density(const DensityOperator& rho) {
    if (rho.matrix.rows() != rho.dim || rho.matrix.cols() != rho.dim)
        throw std::invalid_argument("validate_density: dimension mismatch");
    if (!is_hermitian(rho.matrix, kHermTol))
        throw numeric_error("density operator not Hermitian within tolerance");
    if (std::abs(rho.matrix.trace().real() - 1.0) > kHermTol ||
        std::abs(rho.matrix.trace().imag()) > kHermTol)
        throw numeric_error("density operator trace deviates from 1");
    if (min_eigenvalue(rho.matrix) < -1e-10)
        throw numeric_error("density operator not positive semidefinite");
}

double k_param(const SchmidtSpec& spec) {
    double k = 0.0;
    for (int i = 0; i + 1 < spec.dim_a; i += 2)
        k += spec.coeffs[i] * spec.coeffs[i + 1];
    return std::min(1.0, 2.0 * k); // clamp roundoff at the K=1 extreme
}

double pair_slack(const SchmidtSpec& spec) {
    double d = 0.0;
    int i = 0;
    for (; i + 1 < spec.dim_a; i += 2)
        d += spec.coeffs[i] * spec.coeffs[i] - spec.coeffs[i + 1] * spec.coeffs[i + 1];
    if (i < spec.dim_a) // unpaired trailing coefficient (odd s)
        d += spec.coeffs[i] * spec.coeffs[i];
    return d;
}

void to_json(nlohmann::json& j, const SchmidtSpec& spec) {
    j = nlohmann::json{{"coeffs", spec.coeffs}, {"dim_a", spec.dim_a}, {"dim_b", spec.dim_b}};
}

void from_json(const nlohmann::json& j, SchmidtSpec& spec) {
    std::vector<double> coeffs = j.at("coeffs").get<std::vector<double>>();
    const int dim_a = j.at("dim_a").get<int>();
    const int dim_b = j.at("dim_b").get<int>();
    spec = make_spec(std::move(coeffs), dim_a, dim_b, false);
}

} // namespace chsh
