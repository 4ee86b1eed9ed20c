#include "chsh/analytics.hpp"
#include "chsh/measurements.hpp"
#include "chsh/qmath.hpp"
#include "chsh/sequential.hpp"
#include "chsh/states.hpp"
#include "chsh/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTsirelsonCap = 2.8284271247461903 + 1e-9;

// 15 significant digits, '.' decimal, locale-independent
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

void check_cap(double s) {
    if (std::abs(s) > kTsirelsonCap)
        throw chsh::numeric_error("emitted S value exceeds the Tsirelson cap");
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
    f << text;
}

// Evaluates rows[i] = eval(i) for i in [0, n) across `jobs` threads,
// keeping emission order deterministic.
std::vector<std::string> parallel_rows(int n, int jobs, const std::function<std::string(int)>& eval) {
    std::vector<std::string> rows(n);
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) rows[i] = eval(i);
        return rows;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += jobs) rows[i] = eval(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return rows;
}

struct SpecOptions {
    std::vector<double> coeffs;
    std::string dims;
    std::string spec_file;
    bool strict = false;
};

void add_spec_options(CLI::App* cmd, SpecOptions& opts) {
    cmd->add_option("--coeffs", opts.coeffs, "Schmidt weights, comma separated")->delimiter(',');
    cmd->add_option("--dims", opts.dims, "local dimensions as SxT, e.g. 2x2");
    cmd->add_option("--spec", opts.spec_file, "JSON spec file {coeffs, dim_a, dim_b}");
    cmd->add_flag("--strict", opts.strict, "reject non-normalized coefficient inputs");
}

chsh::SchmidtSpec load_spec(const SpecOptions& opts) {
    if (!opts.spec_file.empty()) {
        if (!opts.coeffs.empty())
            throw std::invalid_argument("give either --spec or --coeffs, not both");
        std::ifstream f(opts.spec_file);
        if (!f) throw std::invalid_argument("cannot open spec file: " + opts.spec_file);
        json j;
        f >> j;
        std::vector<double> coeffs = j.at("coeffs").get<std::vector<double>>();
        return chsh::make_spec(std::move(coeffs), j.at("dim_a").get<int>(),
                               j.at("dim_b").get<int>(), opts.strict);
    }
    if (opts.coeffs.empty())
        throw std::invalid_argument("a state is required: --coeffs with --dims, or --spec FILE");
    int s = 0, t = 0;
    if (std::sscanf(opts.dims.c_str(), "%dx%d", &s, &t) != 2)
        throw std::invalid_argument("--dims must look like SxT, e.g. 4x4");
    return chsh::make_spec(opts.coeffs, s, t, opts.strict);
}

int cmd_simulate(const SpecOptions& spec_opts, std::optional<double> theta1,
                 std::optional<double> theta2, double p, int n_bobs, bool degrees,
                 const std::string& format, const std::string& out_path) {
    const chsh::SchmidtSpec spec = load_spec(spec_opts);
    auto [t1, t2] = chsh::default_angles(spec);
    if (theta1) t1 = degrees ? *theta1 * kPi / 180.0 : *theta1;
    if (theta2) t2 = degrees ? *theta2 * kPi / 180.0 : *theta2;
    const double k = chsh::k_param(spec);

    const chsh::ScenarioConfig cfg{spec, chsh::default_bundle(spec, t1, t2, p), n_bobs};
    const chsh::ChshReport report = chsh::run_scenario(cfg);
    for (double s : report.mixed) check_cap(s);

    std::ostringstream body;
    if (format == "json") {
        json j;
        to_json(j, report);
        j["params"] = {{"K", k}, {"theta1", t1}, {"theta2", t2}, {"p", p}, {"n_bobs", n_bobs}};
        j["spec"] = spec;
        body << j.dump(2) << '\n';
    } else {
        body << "# K=" << fmt(k) << " theta1=" << fmt(t1) << " theta2=" << fmt(t2)
             << " p=" << fmt(p) << '\n';
        body << "k,lambda,S,S_mixed,trace,min_eig\n";
        for (const auto* branch : {&report.branch1, &report.branch2}) {
            const int lambda = (branch == &report.branch1) ? 1 : 2;
            for (const chsh::StageRecord& st : *branch)
                body << st.observer << ',' << lambda << ',' << fmt(st.s_value) << ','
                     << fmt(report.mixed[st.observer - 1]) << ',' << fmt(st.trace_after) << ','
                     << fmt(st.min_eig_after) << '\n';
        }
    }
    write_output(body.str(), out_path);

    // summary to stdout regardless of --out
    std::ostringstream sum;
    sum << "K = " << fmt(k) << ", theta1 = " << fmt(t1) << ", theta2 = " << fmt(t2)
        << ", p = " << fmt(p) << '\n';
    for (size_t i = 0; i < report.mixed.size(); ++i) {
        sum << "S_" << (i + 1) << " = " << fmt(report.mixed[i]);
        if (i >= 2) sum << "  [exploratory (k>2)]";
        sum << '\n';
    }
    const bool dv = report.mixed.size() >= 2 &&
                    report.mixed[0] > 2.0 + chsh::kViolationEps &&
                    report.mixed[1] > 2.0 + chsh::kViolationEps;
    sum << "double violation: " << (dv ? "yes" : "no") << '\n';
    if (out_path.empty())
        std::cerr << sum.str();
    else
        std::cout << sum.str();
    return 0;
}

int cmd_region(std::optional<double> k_single, int k_grid, int p_grid, int jobs,
               const std::string& out_path) {
    if (p_grid < 2) throw std::invalid_argument("--p-grid must be at least 2");
    std::vector<double> ks;
    if (k_single) {
        ks.push_back(*k_single);
    } else {
        if (k_grid < 1) throw std::invalid_argument("--K-grid must be at least 1");
        for (int i = 1; i <= k_grid; ++i) ks.push_back(static_cast<double>(i) / k_grid);
    }
    const int n = static_cast<int>(ks.size()) * p_grid;
    const auto rows = parallel_rows(n, jobs, [&](int idx) {
        const double k = ks[idx / p_grid];
        const double p = static_cast<double>(idx % p_grid) / (p_grid - 1);
        const chsh::MixedScores ms = chsh::mixed_scores(p, k);
        check_cap(ms.s1);
        check_cap(ms.s2);
        const bool both = ms.s1 > 2.0 + chsh::kViolationEps && ms.s2 > 2.0 + chsh::kViolationEps;
        return fmt(p) + "," + fmt(k) + "," + fmt(ms.s1) + "," + fmt(ms.s2) + "," +
               (both ? "1" : "0");
    });

    std::ostringstream body;
    body << "p,K,S1,S2,both_violate\n";
    for (const std::string& r : rows) body << r << '\n';
    for (double k : ks) {
        const chsh::FeasibleInterval fi = chsh::feasible_interval(k);
        body << "# feasible K=" << fmt(k) << " p_low=" << fmt(fi.p_low)
             << " p_high=" << fmt(fi.p_high) << " nonempty=" << (fi.nonempty ? 1 : 0) << '\n';
    }
    body << "# critical_K=" << fmt(chsh::critical_k()) << '\n';
    write_output(body.str(), out_path);
    return 0;
}

int cmd_tradeoff(double k, int samples, int jobs, const std::string& out_path) {
    if (samples < 2) throw std::invalid_argument("--samples must be at least 2");
    const auto rows = parallel_rows(samples, jobs, [&](int i) {
        const double theta = kPi / 2.0 * i / (samples - 1);
        const double s1c1 = chsh::bound_s1_case1(theta, k);
        const double s2c1 = chsh::bound_s2_case1(theta, k);
        const double s1c2 = chsh::bound_s1_case2(theta, k);
        const double s2c2 = chsh::bound_s2_case2(theta, k);
        for (double s : {s1c1, s2c1, s1c2, s2c2}) check_cap(s);
        const double residual = chsh::tradeoff_case2(s1c2, k) - s2c2;
        return fmt(theta) + "," + fmt(s1c1) + "," + fmt(s2c1) + "," + fmt(s1c2) + "," +
               fmt(s2c2) + "," + fmt(residual);
    });
    std::ostringstream body;
    body << "theta,S1hat_c1,S2hat_c1,S1hat_c2,S2hat_c2,eq9_residual\n";
    for (const std::string& r : rows) body << r << '\n';
    write_output(body.str(), out_path);
    return 0;
}

int cmd_optimize(double k, int grid, const std::string& format, const std::string& out_path) {
    const chsh::OptimizerResult res = chsh::optimize_min_violation(k, grid);
    std::ostringstream body;
    if (format == "json") {
        const json j = {{"K", k},
                        {"grid", grid},
                        {"theta1", res.theta1},
                        {"theta2", res.theta2},
                        {"p", res.p},
                        {"min_score", res.min_score}};
        body << j.dump(2) << '\n';
    } else {
        body << "theta1,theta2,p,min_score\n"
             << fmt(res.theta1) << ',' << fmt(res.theta2) << ',' << fmt(res.p) << ','
             << fmt(res.min_score) << '\n';
    }
    write_output(body.str(), out_path);
    return 0;
}

int cmd_verify() {
    const std::vector<chsh::SuiteResult> results = chsh::run_verification();
    bool all_ok = true;
    for (const chsh::SuiteResult& r : results) {
        if (r.passed) {
            std::cout << "PASS " << r.name << '\n';
        } else {
            all_ok = false;
            std::cout << "FAIL " << r.name << ": " << r.detail << '\n';
        }
    }
    return all_ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CHSH nonlocality sharing with projective measurements and shared randomness"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run the sequential scenario on a Schmidt-form state");
    SpecOptions spec_opts;
    add_spec_options(sim, spec_opts);
    std::optional<double> theta1, theta2;
    double p = 0.5;
    int n_bobs = 2;
    bool degrees = false;
    std::string format = "csv", out_path;
    int jobs = 1;
    sim->add_option("--theta1", theta1, "branch-1 angle (default arctan K)");
    sim->add_option("--theta2", theta2, "branch-2 angle (default arctan 2K)");
    sim->add_option("--p", p, "probability of branch 1")->check(CLI::Range(0.0, 1.0));
    sim->add_option("--bobs", n_bobs, "number of sequential observers")->check(CLI::Range(1, 16));
    sim->add_flag("--degrees", degrees, "interpret angles in degrees");
    sim->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    sim->add_option("--out", out_path, "output path (default stdout)");
    sim->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 64));

    // region
    auto* region = app.add_subcommand("region", "scan the (p, K) double-violation region");
    std::optional<double> region_k;
    int k_grid = 20, p_grid = 101, region_jobs = 1;
    std::string region_out;
    region->add_option("--K", region_k, "single K value")->check(CLI::Range(1e-12, 1.0));
    region->add_option("--K-grid", k_grid, "number of K samples in (0, 1]");
    region->add_option("--p-grid", p_grid, "number of p samples in [0, 1]");
    region->add_option("--jobs", region_jobs)->check(CLI::Range(1, 64));
    region->add_option("--out", region_out);

    // tradeoff
    auto* tradeoff = app.add_subcommand("tradeoff", "emit the per-branch bound curves over theta");
    double tk = 1.0;
    int samples = 1000, t_jobs = 1;
    std::string t_out;
    tradeoff->add_option("--K", tk)->required()->check(CLI::Range(1e-12, 1.0));
    tradeoff->add_option("--samples", samples);
    tradeoff->add_option("--jobs", t_jobs)->check(CLI::Range(1, 64));
    tradeoff->add_option("--out", t_out);

    // optimize
    auto* opt = app.add_subcommand("optimize", "grid-search angles and mixing weight");
    double ok = 1.0;
    int ogrid = 32;
    std::string o_format = "csv", o_out;
    opt->add_option("--K", ok)->required()->check(CLI::Range(1e-12, 1.0));
    opt->add_option("--grid", ogrid, "grid resolution (>= 8)");
    opt->add_option("--format", o_format)->check(CLI::IsMember({"csv", "json"}));
    opt->add_option("--out", o_out);

    // verify
    app.add_subcommand("verify", "run the full self-check battery");

    try {
        app.parse(argc, argv);
        if (sim->parsed())
            return cmd_simulate(spec_opts, theta1, theta2, p, n_bobs, degrees, format, out_path);
        if (region->parsed())
            return cmd_region(region_k, k_grid, p_grid, region_jobs, region_out);
        if (tradeoff->parsed()) return cmd_tradeoff(tk, samples, t_jobs, t_out);
        if (opt->parsed()) return cmd_optimize(ok, ogrid, o_format, o_out);
        return cmd_verify();
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const chsh::numeric_error& e) {
        std::cerr << "numeric-consistency failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
