// Command-line entry point: constructs spectral curves, solves the
// quartic parameters, runs the condition checks, samples densities and
// Monte Carlo spectra, and writes reproducible CSV/JSON outputs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "escurve/curve.hpp"
#include "escurve/density.hpp"
#include "escurve/mc.hpp"
#include "escurve/params.hpp"
#include "escurve/sheets.hpp"
#include "escurve/verify.hpp"

namespace {

constexpr const char* kVersion = "escurve 1.0.0";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Output {
    std::string path;  // empty -> stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        f << text;
    }
};

std::string csv_header(const std::string& sub, const std::string& flags) {
    std::string h;
    h += std::string("# tool: ") + kVersion + "\n";
    h += "# subcommand: " + sub + "\n";
    h += "# flags: " + flags + "\n";
    return h;
}

nlohmann::ordered_json json_header(const std::string& sub, const std::string& flags) {
    return {{"tool", kVersion}, {"subcommand", sub}, {"flags", flags}};
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    using namespace escurve;
    CLI::App app{"spectral curves for Hermitian ensembles with a two-point source"};
    app.require_subcommand(1);

    double a = 2.0, x2 = 0.5, tol = 1e-12;
    int grid = 200, n = 400, samples = 100, bins = 80;
    std::uint64_t seed = 1;
    std::string out_path, format = "json";

    auto add_common = [&](CLI::App* sub, bool a_required) {
        auto* oa = sub->add_option("--a", a, "source strength");
        if (a_required) oa->required();
        sub->add_option("--out", out_path, "output file (default stdout)");
        sub->add_option("--format", format, "output format: csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        return sub;
    };

    auto* c_gauss = add_common(app.add_subcommand("gaussian-curve",
                                                  "construct the Gaussian-source curve"),
                               true);
    c_gauss->add_option("--x2", x2, "fraction of -a source eigenvalues");

    auto* c_solve = add_common(
        app.add_subcommand("quartic-solve", "solve the quartic free parameters"), true);
    c_solve->add_option("--tol", tol, "Newton tolerance in rescaled units");

    auto* c_verify = add_common(
        app.add_subcommand("verify", "run the equilibrium condition checks"), true);
    (void)c_verify;

    auto* c_density =
        add_common(app.add_subcommand("density", "limiting density of states"), true);
    c_density->add_option("--grid", grid, "sample points per cut");

    auto* c_mc = add_common(
        app.add_subcommand("mc", "Monte Carlo sampling of the Gaussian ensemble"), false);
    c_mc->add_option("--x2", x2, "fraction of -a source eigenvalues");
    c_mc->add_option("--n", n, "matrix size (even)");
    c_mc->add_option("--samples", samples, "number of matrix samples");
    c_mc->add_option("--seed", seed, "RNG seed");
    c_mc->add_option("--bins", bins, "histogram bins");

    auto* c_report = add_common(
        app.add_subcommand("report", "full machine-readable report"), true);
    (void)c_report;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            app.exit(e);
            return 0;
        }
        std::ostringstream oss;
        app.exit(e, oss, oss);
        std::cerr << oss.str();
        return 2;
    }

    auto flags_of = [&](const CLI::App* sub) {
        std::string s;
        for (const auto* opt : sub->get_options()) {
            if (opt->count() == 0 && opt->get_default_str().empty()) continue;
            if (!s.empty()) s += " ";
            s += opt->get_name() + "=" +
                 (opt->count() ? opt->results()[0] : opt->get_default_str());
        }
        return s;
    };

    Output out{out_path};
    try {
        if (c_gauss->parsed()) {
            SpectralCurve c = gaussian_curve(a, x2);
            std::string flags = "--a=" + fmt(a) + " --x2=" + fmt(x2);
            if (format == "json") {
                nlohmann::ordered_json j = json_header("gaussian-curve", flags);
                j["curve"] = to_json(c);
                out.write(dump(j));
            } else {
                std::string t = csv_header("gaussian-curve", flags);
                t += "poly,coefficients_ascending\n";
                auto row = [&](const char* nm, const RPoly& p) {
                    t += nm;
                    for (double v : p.c) t += "," + fmt(v);
                    t += "\n";
                };
                row("c2", c.c2);
                row("c1", c.c1);
                row("c0", c.c0);
                out.write(t);
            }
            return 0;
        }
        if (c_solve->parsed()) {
            QuarticParameters qp = solve_parameters(a, tol);
            BranchStructure b = branch_points(qpoly(qp.alpha, qp.beta, a), a);
            std::string flags = "--a=" + fmt(a) + " --tol=" + fmt(tol);
            nlohmann::ordered_json body{
                {"a", qp.a},
                {"alpha", qp.alpha},
                {"beta", qp.beta},
                {"grad_norm", qp.grad_norm},
                {"b2_residual", qp.b2_residual},
                {"hessian_det", qp.hessian_det},
                {"iterations", qp.iterations},
                {"gamma1", b.gamma1},
                {"gamma2", b.gamma2},
                {"lambda_star", {b.lambda_star.real(), b.lambda_star.imag()}},
                {"factor_residual", b.factor_residual},
                {"pass", qp.grad_norm <= 1e-8 && b.factor_residual <= 1e-6},
            };
            if (format == "json") {
                nlohmann::ordered_json j = json_header("quartic-solve", flags);
                j["parameters"] = body;
                out.write(dump(j));
            } else {
                std::string t = csv_header("quartic-solve", flags) + "key,value\n";
                for (auto& [k, v] : body.items())
                    t += k + "," + (v.is_number_float() ? fmt(v.get<double>()) : v.dump()) +
                         "\n";
                out.write(t);
            }
            return 0;
        }
        if (c_verify->parsed() || c_report->parsed()) {
            const bool is_report = c_report->parsed();
            VerificationReport rep = full_report(a);
            std::string flags = "--a=" + fmt(a);
            nlohmann::ordered_json j =
                json_header(is_report ? "report" : "verify", flags);
            j["report"] = to_json(rep);
            if (is_report && rep.pass) {
                // Also attach the curve, density masses and g-level checks.
                QuarticParameters qp = solve_parameters(a);
                SpectralCurve curve = quartic_curve(a, qp.alpha, qp.beta);
                BranchStructure branch = branch_points(discriminant_t(curve), a);
                SheetSampler s(curve, branch);
                DensityProfile prof = profile(s, 64);
                GFunctionSet gf(s);
                nlohmann::ordered_json extra;
                extra["curve"] = to_json(curve);
                extra["masses"] = prof.masses;
                extra["total_mass"] = prof.total_mass;
                extra["c1"] = gf.c1();
                extra["c2"] = gf.c2();
                for (int jj = 1; jj <= 2; ++jj) {
                    GConditions gc = check_g_conditions(gf, jj);
                    extra["g_conditions_j" + std::to_string(jj)] = {
                        {"ell", gc.ell},
                        {"constancy_dev", gc.constancy_dev},
                        {"outside_margin", gc.outside_margin}};
                }
                j["density"] = extra;
            }
            out.write(dump(j));
            return rep.pass ? 0 : 1;
        }
        if (c_density->parsed()) {
            QuarticParameters qp = solve_parameters(a);
            SpectralCurve curve = quartic_curve(a, qp.alpha, qp.beta);
            BranchStructure branch = branch_points(discriminant_t(curve), a);
            SheetSampler s(curve, branch);
            DensityProfile prof = profile(s, grid);
            std::string flags = "--a=" + fmt(a) + " --grid=" + std::to_string(grid);
            if (format == "json") {
                nlohmann::ordered_json j = json_header("density", flags);
                j["support"] = {{prof.support[0].first, prof.support[0].second},
                                {prof.support[1].first, prof.support[1].second}};
                j["masses"] = prof.masses;
                j["total_mass"] = prof.total_mass;
                j["xs"] = prof.xs;
                j["rho"] = prof.rho;
                out.write(dump(j));
            } else {
                std::string t = csv_header("density", flags);
                t += "# masses: " + fmt(prof.masses[0]) + "," + fmt(prof.masses[1]) + "\n";
                t += "# total_mass: " + fmt(prof.total_mass) + "\n";
                t += "x,rho\n";
                for (std::size_t i = 0; i < prof.xs.size(); ++i)
                    t += fmt(prof.xs[i]) + "," + fmt(prof.rho[i]) + "\n";
                out.write(t);
            }
            return 0;
        }
        if (c_mc->parsed()) {
            McConfig cfg{n, samples, seed, bins};
            SpectrumBatch batch = sample_spectrum_gaussian(cfg, a);
            SpectralCurve curve = gaussian_curve(a, x2);
            BranchStructure branch = branch_points(discriminant_t(curve), a);
            SheetSampler s(curve, branch);
            HistogramComparison cmp = compare_histogram(batch, s);
            std::string flags = "--a=" + fmt(a) + " --n=" + std::to_string(n) +
                                " --samples=" + std::to_string(samples) +
                                " --seed=" + std::to_string(seed) +
                                " --bins=" + std::to_string(bins);
            if (format == "json") {
                nlohmann::ordered_json j = json_header("mc", flags);
                j["comparison"] = {{"cdf_sup_distance", cmp.cdf_sup_distance},
                                   {"per_bin_max", cmp.per_bin_max},
                                   {"n", n},
                                   {"samples", samples},
                                   {"seed", seed},
                                   {"a", a}};
                auto edges = cluster_edges(batch);
                j["cluster_edges"] = {edges[0], edges[1], edges[2], edges[3]};
                j["branch_points"] = {-branch.gamma2, -branch.gamma1, branch.gamma1,
                                      branch.gamma2};
                out.write(dump(j));
            } else {
                std::string t = csv_header("mc", flags);
                t += "# cdf_sup_distance: " + fmt(cmp.cdf_sup_distance) + "\n";
                t += "sample,eigenvalue\n";
                for (int si = 0; si < samples; ++si)
                    for (int i = 0; i < n; ++i)
                        t += std::to_string(si) + "," +
                             fmt(batch.eigenvalues[std::size_t(si) * n + i]) + "\n";
                out.write(t);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    (void)flags_of;
    return 2;
}
