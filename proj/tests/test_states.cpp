#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chsh/states.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>

using namespace chsh;

namespace {
std::mt19937 rng(777);

SchmidtSpec random_spec(int s, int t) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> w(s);
    for (double& x : w) x = u(rng);
    return make_spec(w, s, t);
}
} // namespace

TEST_CASE("make_spec normalizes, pads and sorts") {
    const SchmidtSpec bell = make_spec({1.0, 1.0}, 2, 2);
    CHECK(bell.coeffs[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(bell.coeffs[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

    const SchmidtSpec product = make_spec({1.0, 0.0}, 2, 2);
    CHECK(product.coeffs == std::vector<double>{1.0, 0.0});

    // already normalized, returned unchanged (up to sort)
    const SchmidtSpec four =
        make_spec({std::sqrt(0.4), std::sqrt(0.3), std::sqrt(0.2), std::sqrt(0.1)}, 4, 4);
    double sq = 0.0;
    for (double c : four.coeffs) sq += c * c;
    CHECK(sq == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(four.coeffs[0] == doctest::Approx(std::sqrt(0.4)).epsilon(1e-12));

    // padding to dim_a and descending order
    const SchmidtSpec padded = make_spec({0.2, 0.9}, 3, 4);
    CHECK(padded.coeffs.size() == 3);
    CHECK(padded.coeffs[0] >= padded.coeffs[1]);
    CHECK(padded.coeffs[2] == 0.0);
}

TEST_CASE("make_spec error paths") {
    CHECK_THROWS_AS(make_spec({-0.1, 1.0}, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_spec({0.0, 0.0}, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_spec({1.0, 1.0}, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_spec({1.0, 1.0}, 2, 2, /*strict=*/true), std::invalid_argument);
    CHECK_NOTHROW(make_spec({std::sqrt(0.5), std::sqrt(0.5)}, 2, 2, /*strict=*/true));
}

TEST_CASE("pure_state embedding") {
    const StateVector bell = pure_state(make_spec({1.0, 1.0}, 2, 2));
    CHECK(bell.amps[0] == cxd{1.0 / std::sqrt(2.0), 0.0});
    CHECK(bell.amps[1] == cxd{0.0, 0.0});
    CHECK(bell.amps[2] == cxd{0.0, 0.0});
    CHECK(bell.amps[3] == cxd{1.0 / std::sqrt(2.0), 0.0});

    const StateVector rect = pure_state(make_spec({1.0, 0.0}, 2, 3));
    CHECK(rect.dim == 6);
    CHECK(rect.amps[0] == cxd{1.0, 0.0});
    for (int i = 1; i < 6; ++i) CHECK(rect.amps[i] == cxd{0.0, 0.0});

    const StateVector four =
        pure_state(make_spec({std::sqrt(0.4), std::sqrt(0.3), std::sqrt(0.2), std::sqrt(0.1)}, 4, 4));
    for (int i = 0; i < 16; ++i) {
        const bool diag = (i % 5 == 0); // joint indices 0, 5, 10, 15
        CHECK((std::abs(four.amps[i]) > 0.0) == diag);
    }
}

TEST_CASE("pure_state norm is 1 for random specs up to 32x32") {
    for (int s : {2, 5, 17, 32}) {
        const StateVector psi = pure_state(random_spec(s, s));
        double norm = 0.0;
        for (const cxd& a : psi.amps) norm += std::norm(a);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("density operators are valid and pure") {
    const DensityOperator prod = density(make_spec({1.0, 0.0}, 2, 2));
    CHECK(prod.matrix(0, 0) == cxd{1.0, 0.0});
    CHECK(std::abs(prod.matrix.trace() - cxd{1.0, 0.0}) < 1e-15);

    const DensityOperator bell = density(make_spec({1.0, 1.0}, 2, 2));
    CHECK(bell.matrix(0, 0).real() == doctest::Approx(0.5));
    CHECK(bell.matrix(0, 3).real() == doctest::Approx(0.5));
    CHECK(bell.matrix(3, 3).real() == doctest::Approx(0.5));

    for (int trial = 0; trial < 10; ++trial) {
        const DensityOperator rho = density(random_spec(4, 5));
        const double purity = expectation(rho.matrix, rho.matrix);
        CHECK(purity == doctest::Approx(1.0).epsilon(1e-12));
        CHECK_NOTHROW(validate_density(rho));
    }
}

TEST_CASE("k_param") {
    CHECK(k_param(make_spec({1.0, 1.0}, 2, 2)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k_param(make_spec({1.0, 0.0, 0.0}, 3, 3)) == 0.0);
    const SchmidtSpec four =
        make_spec({std::sqrt(0.4), std::sqrt(0.3), std::sqrt(0.2), std::sqrt(0.1)}, 4, 4);
    CHECK(k_param(four) ==
          doctest::Approx(2.0 * (std::sqrt(0.12) + std::sqrt(0.02))).epsilon(1e-14));
    // odd s: last coefficient unpaired
    const SchmidtSpec five = make_spec(std::vector<double>(5, 1.0), 5, 5);
    CHECK(k_param(five) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("k_param range and K=1 characterization") {
    for (int trial = 0; trial < 200; ++trial) {
        const int s = 2 + static_cast<int>(rng() % 7);
        const SchmidtSpec spec = random_spec(s, s);
        const double k = k_param(spec);
        CHECK(k >= 0.0);
        CHECK(k <= 1.0 + 1e-12);
    }
    // equal pairs filling s give exactly 1
    CHECK(k_param(make_spec({3.0, 3.0, 1.0, 1.0}, 4, 4)) == doctest::Approx(1.0).epsilon(1e-14));
    // any broken pair gives strictly less
    CHECK(k_param(make_spec({3.0, 2.9, 1.0, 1.0}, 4, 4)) < 1.0 - 1e-6);
}

TEST_CASE("pair_slack") {
    CHECK(pair_slack(make_spec({1.0, 1.0}, 2, 2)) == doctest::Approx(0.0));
    CHECK(pair_slack(make_spec({1.0, 0.0}, 2, 2)) == doctest::Approx(1.0));
    const SchmidtSpec four =
        make_spec({std::sqrt(0.4), std::sqrt(0.3), std::sqrt(0.2), std::sqrt(0.1)}, 4, 4);
    CHECK(pair_slack(four) == doctest::Approx(0.2).epsilon(1e-12));
    for (int trial = 0; trial < 100; ++trial) {
        const int s = 2 + static_cast<int>(rng() % 7);
        CHECK(pair_slack(random_spec(s, s)) >= 0.0);
    }
    // zero iff pairs are equal (s even)
    CHECK(pair_slack(make_spec({2.0, 2.0, 0.5, 0.5}, 4, 4)) == doctest::Approx(0.0));
    CHECK(pair_slack(make_spec({2.0, 1.9, 0.5, 0.5}, 4, 4)) > 1e-6);
}

TEST_CASE("spec JSON round trip") {
    const SchmidtSpec spec = make_spec({0.8, 0.5, 0.3}, 3, 4);
    nlohmann::json j = spec;
    const SchmidtSpec back = j.get<SchmidtSpec>();
    CHECK(back.dim_a == spec.dim_a);
    CHECK(back.dim_b == spec.dim_b);
    for (int i = 0; i < 3; ++i)
        CHECK(back.coeffs[i] == doctest::Approx(spec.coeffs[i]).epsilon(1e-15));
}
