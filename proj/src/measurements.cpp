#include "chsh/measurements.hpp"

#include <cmath>

namespace chsh {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_local_dim(int d, const char* where) {
    if (d < 2 || d > 32)
        throw std::invalid_argument(std::string(where) + ": local dimension must be in [2, 32]");
}

void check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= kPi / 2.0 + 1e-12))
        throw std::invalid_argument("theta must lie in [0, pi/2]");
}

CMatrix half_sum_with_identity(const CMatrix& obs) {
    return (CMatrix::identity(obs.rows()) + obs) * 0.5;
}

} // namespace

CMatrix pauli(int which) {
    CMatrix m(2, 2);
    switch (which) {
        case 1:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case 3:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
        default:
            throw std::invalid_argument("pauli: only sigma_1 and sigma_3 are used here");
    }
    return m;
}

void validate_observable(const Observable& obs) {
    if (!obs.matrix.square())
        throw std::invalid_argument("observable must be square");
    if (!is_hermitian(obs.matrix, kHermTol))
        throw numeric_error("observable not Hermitian");
    const CMatrix sq = obs.matrix * obs.matrix;
    if (sq.max_abs_diff(CMatrix::identity(obs.matrix.rows())) > kHermTol)
        throw numeric_error("observable does not square to identity");
}

void validate_pair(const ProjectivePair& pair) {
    if (!pair.p0.square() || pair.p0.rows() != pair.p1.rows() || !pair.p1.square())
        throw std::invalid_argument("projective pair must be square and equal-dimensional");
    const int d = pair.p0.rows();
    for (const CMatrix* p : {&pair.p0, &pair.p1}) {
        if (!is_hermitian(*p, kHermTol))
            throw numeric_error("projector not Hermitian");
        if ((*p * *p).max_abs_diff(*p) > kHermTol)
            throw numeric_error("projector not idempotent");
    }
    if ((pair.p0 + pair.p1).max_abs_diff(CMatrix::identity(d)) > 1e-12)
        throw numeric_error("projective pair not complete");
}

CMatrix tiled_block(int dim, const CMatrix& block2) {
    if (block2.rows() != 2 || block2.cols() != 2)
        throw std::invalid_argument("tiled_block: block must be 2x2");
    const int pairs = dim / 2;
    CMatrix out(dim, dim);
    for (int k = 0; k < pairs; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                out(2 * k + i, 2 * k + j) = block2(i, j);
    if (dim % 2 == 1) out(dim - 1, dim - 1) = 1.0; // trailing +1 block
    return out;
}

ObservablePair alice_observables(int s, double theta) {
    check_local_dim(s, "alice_observables");
    check_theta(theta);
    const CMatrix z = pauli(3);
    const CMatrix x = pauli(1);
    const CMatrix plus = z * std::cos(theta) + x * std::sin(theta);
    const CMatrix minus = z * std::cos(theta) - x * std::sin(theta);
    ObservablePair out{Observable{tiled_block(s, plus)}, Observable{tiled_block(s, minus)}};
    validate_observable(out.a0);
    validate_observable(out.a1);
    return out;
}

PairSet bob_pairs_case1(int t) {
    check_local_dim(t, "bob_pairs_case1");
    const CMatrix id = CMatrix::identity(t);
    const CMatrix p00 = half_sum_with_identity(tiled_block(t, pauli(3)));
    const CMatrix p01 = half_sum_with_identity(tiled_block(t, pauli(1)));
    PairSet out{ProjectivePair{p00, id - p00, 0}, ProjectivePair{p01, id - p01, 1}};
    validate_pair(out.y0);
    validate_pair(out.y1);
    return out;
}

PairSet bob_pairs_case2(int t) {
    check_local_dim(t, "bob_pairs_case2");
    const CMatrix id = CMatrix::identity(t);
    const CMatrix p01 = half_sum_with_identity(tiled_block(t, pauli(1)));
    PairSet out{ProjectivePair{id, CMatrix(t, t), 0}, ProjectivePair{p01, id - p01, 1}};
    validate_pair(out.y0);
    validate_pair(out.y1);
    return out;
}

ObservablePair bob2_observables_case2(int t) {
    check_local_dim(t, "bob2_observables_case2");
    ObservablePair out{Observable{tiled_block(t, pauli(3))}, Observable{tiled_block(t, pauli(1))}};
    validate_observable(out.a0);
    validate_observable(out.a1);
    return out;
}

Observable observable_of(const ProjectivePair& pair) {
    Observable out{pair.p0 - pair.p1};
    validate_observable(out);
    return out;
}

ProjectivePair pair_of(const Observable& obs, int input_label) {
    const CMatrix p0 = half_sum_with_identity(obs.matrix);
    ProjectivePair out{p0, CMatrix::identity(obs.matrix.rows()) - p0, input_label};
    validate_pair(out);
    return out;
}

std::pair<double, double> default_angles(const SchmidtSpec& spec) {
    const double k = k_param(spec);
    return {std::atan(k), std::atan(2.0 * k)};
}

StrategyBundle default_bundle(const SchmidtSpec& spec, double theta1, double theta2, double mix_p) {
    check_theta(theta1);
    check_theta(theta2);
    if (!(mix_p >= 0.0 && mix_p <= 1.0))
        throw std::invalid_argument("default_bundle: mix_p must lie in [0, 1]");

    StrategyBundle bundle;
    bundle.mix_p = mix_p;

    bundle.branch1.theta = theta1;
    bundle.branch1.alice = alice_observables(spec.dim_a, theta1);
    bundle.branch1.bob1 = bob_pairs_case1(spec.dim_b);
    bundle.branch1.bob2 = bundle.branch1.bob1; // observers reuse the case-(i) pairs

    bundle.branch2.theta = theta2;
    bundle.branch2.alice = alice_observables(spec.dim_a, theta2);
    bundle.branch2.bob1 = bob_pairs_case2(spec.dim_b);
    const ObservablePair b2 = bob2_observables_case2(spec.dim_b);
    bundle.branch2.bob2 = PairSet{pair_of(b2.a0, 0), pair_of(b2.a1, 1)};

    return bundle;
}

} // namespace chsh
