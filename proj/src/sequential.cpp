#include "chsh/sequential.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace chsh {

namespace {

constexpr double kTsirelson = 2.8284271247461903; // 2*sqrt(2)

std::vector<StageRecord> run_branch(const SchmidtSpec& spec, const StrategyBranch& branch,
                                    int n_bobs) {
    std::vector<StageRecord> stages;
    stages.reserve(n_bobs);
    DensityOperator rho = density(spec);
    for (int k = 1; k <= n_bobs; ++k) {
        const PairSet& pairs = (k == 1) ? branch.bob1 : branch.bob2;
        const Observable b0 = observable_of(pairs.y0);
        const Observable b1 = observable_of(pairs.y1);
        const double s = chsh_value(rho, branch.alice.a0, branch.alice.a1, b0, b1);
        rho = luders_update(rho, pairs, spec.dim_a);
        stages.push_back(StageRecord{k, s, rho.matrix.trace().real(), min_eigenvalue(rho.matrix)});
    }
    return stages;
}

} // namespace

DensityOperator luders_update(const DensityOperator& rho, const PairSet& pairs, int dim_a,
                              double input_weight) {
    const int t = pairs.y0.p0.rows();
    if (rho.dim != dim_a * t)
        throw std::invalid_argument("luders_update: state dimension does not match dim_a * t");
    const CMatrix id_a = CMatrix::identity(dim_a);
    CMatrix out(rho.dim, rho.dim);
    for (const CMatrix* p : {&pairs.y0.p0, &pairs.y0.p1, &pairs.y1.p0, &pairs.y1.p1}) {
        const CMatrix joint = tensor(id_a, *p);
        out = out + (joint * rho.matrix * joint) * input_weight;
    }
    const cxd tr = out.trace();
    if (std::abs(tr.real() - 1.0) > 1e-12 || std::abs(tr.imag()) > 1e-12)
        throw numeric_error("luders_update: trace not preserved");
    DensityOperator next{rho.dim, std::move(out)};
    validate_density(next);
    return next;
}

double chsh_value(const DensityOperator& rho, const Observable& a0, const Observable& a1,
                  const Observable& b0, const Observable& b1) {
    if (a0.matrix.rows() * b0.matrix.rows() != rho.dim)
        throw std::invalid_argument("chsh_value: operator dimensions do not match the state");
    const double e00 = expectation(tensor(a0.matrix, b0.matrix), rho.matrix);
    const double e01 = expectation(tensor(a0.matrix, b1.matrix), rho.matrix);
    const double e10 = expectation(tensor(a1.matrix, b0.matrix), rho.matrix);
    const double e11 = expectation(tensor(a1.matrix, b1.matrix), rho.matrix);
    const double s = e00 + e01 + e10 - e11;
    if (std::abs(s) > kTsirelson + 1e-9)
        throw numeric_error("chsh_value: Tsirelson bound exceeded");
    return s;
}

ChshReport run_scenario(const ScenarioConfig& cfg) {
    if (cfg.n_bobs < 1 || cfg.n_bobs > 16)
        throw std::invalid_argument("run_scenario: n_bobs must lie in [1, 16]");
    ChshReport report;
    report.mix_p = cfg.bundle.mix_p;
    report.branch1 = run_branch(cfg.spec, cfg.bundle.branch1, cfg.n_bobs);
    report.branch2 = run_branch(cfg.spec, cfg.bundle.branch2, cfg.n_bobs);
    report.mixed.resize(cfg.n_bobs);
    for (int k = 0; k < cfg.n_bobs; ++k)
        report.mixed[k] = cfg.bundle.mix_p * report.branch1[k].s_value +
                          (1.0 - cfg.bundle.mix_p) * report.branch2[k].s_value;
    return report;
}

void to_json(nlohmann::json& j, const ChshReport& report) {
    j = nlohmann::json::object();
    j["mix_p"] = report.mix_p;
    auto stages = nlohmann::json::array();
    for (const auto* branch : {&report.branch1, &report.branch2}) {
        const int lambda = (branch == &report.branch1) ? 1 : 2;
        for (const StageRecord& st : *branch)
            stages.push_back({{"k", st.observer},
                              {"lambda", lambda},
                              {"S", st.s_value},
                              {"trace", st.trace_after},
                              {"min_eig", st.min_eig_after}});
    }
    j["stages"] = std::move(stages);
    auto mixed = nlohmann::json::array();
    for (size_t k = 0; k < report.mixed.size(); ++k)
        mixed.push_back({{"k", static_cast<int>(k) + 1}, {"S_mixed", report.mixed[k]}});
    j["mixed"] = std::move(mixed);
}

} // namespace chsh
