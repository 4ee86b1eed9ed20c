#ifndef CHSH_SEQUENTIAL_HPP
#define CHSH_SEQUENTIAL_HPP

#include "chsh/measurements.hpp"
#include "chsh/qmath.hpp"
#include "chsh/states.hpp"

#include <nlohmann/json_fwd.hpp>
#include <vector>

namespace chsh {

struct ScenarioConfig {
    SchmidtSpec spec;
    StrategyBundle bundle;
    int n_bobs = 2;
};

struct StageRecord {
    int observer = 0;          // k
    double s_value = 0.0;      // S_k^lambda
    double trace_after = 0.0;  // after this observer's update
    double min_eig_after = 0.0;
};

struct ChshReport {
    double mix_p = 1.0;
    std::vector<StageRecord> branch1;
    std::vector<StageRecord> branch2;
    std::vector<double> mixed; // S_k = p S_k^1 + (1-p) S_k^2
};

/// Input/outcome-averaged projective update on Bob's side:
///   rho' = sum_y w sum_b (I_A (x) P_b|y) rho (I_A (x) P_b|y),
/// with w = 1/2 for the two uniform inputs. Completeness of each pair
/// makes the map trace-preserving; the trace is asserted within 1e-12
/// and the output re-validated as a density operator.
DensityOperator luders_update(const DensityOperator& rho, const PairSet& pairs, int dim_a,
                              double input_weight = 0.5);

/// <A0 B0> + <A0 B1> + <A1 B0> - <A1 B1> on rho; asserts the Tsirelson
/// cap 2*sqrt(2) + 1e-9.
double chsh_value(const DensityOperator& rho, const Observable& a0, const Observable& a1,
                  const Observable& b0, const Observable& b1);

/// Runs both branches through the sequential chain and mixes the scores.
/// Observer k measures rho^(k,lambda) before its own update; observers
/// beyond the second reuse the second observer's operators (exploratory).
ChshReport run_scenario(const ScenarioConfig& cfg);

void to_json(nlohmann::json& j, const ChshReport& report);

} // namespace chsh

#endif
