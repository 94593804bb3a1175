// Command-line front end: resolvent tables, series coefficients, solution grids,
// error certificates, and an independent-quadrature validation gate.
//
// Subcommands:
//   gamma-table  n-fold self-convolutions of the unit rect on uniform grids
//   beta         series coefficient triangle for a discretized kernel
//   resolvent    h on a uniform grid, with mass / depth / tail metadata
//   solve        y = f + h*f for an atoms + regular input signal
//   certify      error certificate JSON for a kernel discretized at delta
//   validate     compare against the direct quadrature solver; exit 2 on failure
//
// Kernels are given as JSON (inline or a file path). All numeric output uses
// %.17g in the C locale, so reruns are byte-identical.

#include <algorithm>
#include <clocale>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "volterra/volterra.hpp"

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json load_json_arg(const std::string& arg, const char* what) {
    std::string text = arg;
    if (arg.empty()) throw volterra::error(std::string(what) + ": empty argument");
    if (arg.front() != '{' && arg.front() != '[') {
        std::ifstream in(arg);
        if (!in) throw volterra::error(std::string(what) + ": cannot open " + arg);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw volterra::error(std::string(what) + ": malformed JSON");
    return j;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw volterra::error("cannot open output file " + path);
    return out;
}

struct build_inputs {
    volterra::kernel_spec spec;
    volterra::piecewise_kernel pk;
};

build_inputs discretized(const std::string& kernel_arg, double delta, double horizon) {
    build_inputs b;
    b.spec = volterra::kernel_from_json(load_json_arg(kernel_arg, "kernel"));
    b.pk = volterra::discretize(b.spec, delta, horizon);
    return b;
}

// Sup-norm discretization certificate; tabulated kernels carry no smoothness
// information, so theirs is a bare zero-error bound (g is already a staircase).
volterra::certificate sup_certificate(const build_inputs& b, double delta,
                                      volterra::norm_kind kind, double window) {
    double kernel_error = 0.0;
    if (!std::holds_alternative<volterra::tabulated_kernel>(b.spec))
        kernel_error = volterra::sup_discretization_error(b.spec, delta);
    const double k_bound = std::max(volterra::l1_mass(b.spec), b.pk.l1_mass());
    return volterra::resolvent_certificate(kernel_error, k_bound, kind, window);
}

int cmd_gamma_table(int nmax, int grid, const std::string& out_path) {
    volterra::gamma_evaluator ge;
    auto out = open_out(out_path);
    out << "# gamma-table n=1.." << nmax << " grid=" << grid << "\n";
    out << "n,t,gamma\n";
    for (int n = 1; n <= nmax; ++n) {
        const double step = static_cast<double>(n) / (grid - 1);
        for (int i = 0; i < grid; ++i) {
            const double t = i * step;
            out << n << ',' << fmt(t) << ',' << fmt(ge(n, t)) << "\n";
        }
    }
    return 0;
}

int cmd_beta(const std::string& kernel_arg, double delta, double horizon, int depth,
             const std::string& out_path) {
    const build_inputs b = discretized(kernel_arg, delta, horizon);
    std::vector<double> a(b.pk.betas.size());
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = b.pk.betas[j] * delta;
    const int shifts = static_cast<int>(std::ceil(horizon / delta));
    const volterra::beta_triangle tri = volterra::build_triangle(a, depth, shifts);

    auto out = open_out(out_path);
    out << "# beta triangle delta=" << fmt(delta) << " horizon=" << fmt(horizon)
        << " depth=" << depth << " k_eff=" << fmt(tri.k_eff) << "\n";
    for (int n = 1; n <= tri.depth; ++n) {
        const volterra::mass_info mi = volterra::mass_check(tri, n);
        out << "# row " << n << " mass=" << fmt(mi.sum)
            << (mi.lossless ? " lossless" : " truncated-lower-bound") << "\n";
    }
    out << "n,r,beta\n";
    for (int n = 1; n <= tri.depth; ++n) {
        const auto& row = tri.row(n);
        for (std::size_t r = 0; r < row.size(); ++r)
            if (row[r] != 0.0) out << n << ',' << r << ',' << fmt(row[r]) << "\n";
    }
    return 0;
}

int cmd_resolvent(const std::string& kernel_arg, double delta, double horizon,
                  double tol, int grid, const std::string& out_path) {
    const build_inputs b = discretized(kernel_arg, delta, horizon);
    const volterra::resolvent res = volterra::resolvent::build(b.pk, horizon, tol);
    const volterra::certificate cert =
        sup_certificate(b, delta, volterra::norm_kind::sup, 0.0);

    const double step = horizon / (grid - 1);
    const std::vector<double> h = res.eval_grid(step, grid);

    auto out = open_out(out_path);
    out << "# resolvent delta=" << fmt(delta) << " horizon=" << fmt(horizon)
        << " tol=" << fmt(tol) << "\n";
    out << "# k_eff=" << fmt(res.k_eff()) << " depth=" << res.depth()
        << " tail_bound_sup=" << fmt(res.tail_bound_sup()) << "\n";
    out << "# kernel_error_sup=" << fmt(cert.kernel_error)
        << " resolvent_error_sup=" << fmt(cert.resolvent_error) << "\n";
    out << "t,h\n";
    for (int i = 0; i < grid; ++i)
        out << fmt(i * step) << ',' << fmt(h[static_cast<std::size_t>(i)]) << "\n";
    return 0;
}

int cmd_solve(const std::string& kernel_arg, double delta, double horizon, double tol,
              const std::string& signal_arg, double step, const std::string& out_path) {
    const build_inputs b = discretized(kernel_arg, delta, horizon);
    const volterra::resolvent res = volterra::resolvent::build(b.pk, horizon, tol);
    const volterra::input_signal sig =
        volterra::signal_from_json(load_json_arg(signal_arg, "signal"));

    volterra::time_grid grid = volterra::default_grid(res);
    if (step > 0.0) {
        grid.step = step;
        grid.count = static_cast<int>(std::floor(horizon / step)) + 1;
    }
    const volterra::solution sol = volterra::solve(res, sig, grid);

    auto out = open_out(out_path);
    out << "# solve delta=" << fmt(delta) << " horizon=" << fmt(horizon)
        << " step=" << fmt(grid.step) << " atoms=" << sol.atoms.size() << "\n";
    out << "t,y_regular\n";
    for (int i = 0; i < grid.count; ++i)
        out << fmt(i * grid.step) << ','
            << fmt(sol.regular_samples[static_cast<std::size_t>(i)]) << "\n";

    auto atoms_out = open_out(out_path + ".atoms.csv");
    atoms_out << "t,w\n";
    for (const volterra::atom& a : sol.atoms)
        atoms_out << fmt(a.t) << ',' << fmt(a.w) << "\n";
    return 0;
}

int cmd_certify(const std::string& kernel_arg, double delta, double horizon,
                double f_mass, double window, const std::string& out_path) {
    const build_inputs b = discretized(kernel_arg, delta, horizon);
    const volterra::norm_kind kind =
        window > 0.0 ? volterra::norm_kind::sup_windowed : volterra::norm_kind::sup;
    volterra::certificate cert = sup_certificate(b, delta, kind, window);
    if (f_mass >= 0.0) cert = volterra::solution_certificate(cert, f_mass);

    const nlohmann::json j = volterra::certificate_to_json(cert);
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        auto out = open_out(out_path);
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_validate(const std::string& kernel_arg, double delta, double horizon,
                 double tol, double step) {
    const build_inputs b = discretized(kernel_arg, delta, horizon);
    const volterra::resolvent res = volterra::resolvent::build(b.pk, horizon, tol);
    const volterra::certificate cert =
        sup_certificate(b, delta, volterra::norm_kind::sup, 0.0);
    const volterra::validation_report rep =
        volterra::validate_against_oracle(res, cert.resolvent_error, step);

    std::cout << "step " << fmt(rep.step) << "\n"
              << "max_diff " << fmt(rep.max_diff) << "\n"
              << "max_diff_half " << fmt(rep.max_diff_half) << "\n"
              << "l1_diff " << fmt(rep.l1_diff) << "\n"
              << "a_est " << fmt(rep.a_est) << "\n"
              << "c_est " << fmt(rep.c_est) << "\n"
              << "budget " << fmt(rep.budget) << "\n"
              << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"resolvent kernels for Volterra equations of the second kind"};
    app.require_subcommand(1);

    std::string kernel_arg, signal_arg, out_path;
    double delta = 0.25, horizon = 5.0, tol = 1e-10, step = 0.0;
    double f_mass = -1.0, window = 0.0;
    int nmax = 3, grid = 300, depth = 8;

    auto* sc_gamma = app.add_subcommand("gamma-table", "tabulate gamma_1..gamma_n");
    sc_gamma->add_option("--n", nmax, "largest convolution power")->required();
    sc_gamma->add_option("--grid", grid, "points per curve")->check(CLI::Range(2, 100000000));
    sc_gamma->add_option("--out", out_path, "output CSV path")->required();

    auto* sc_beta = app.add_subcommand("beta", "series coefficient triangle");
    sc_beta->add_option("--kernel", kernel_arg, "kernel JSON (inline or path)")->required();
    sc_beta->add_option("--delta", delta, "discretization step")->required();
    sc_beta->add_option("--horizon", horizon, "time horizon")->required();
    sc_beta->add_option("--depth", depth, "series depth");
    sc_beta->add_option("--out", out_path, "output CSV path")->required();

    auto* sc_res = app.add_subcommand("resolvent", "resolvent kernel on a grid");
    sc_res->add_option("--kernel", kernel_arg, "kernel JSON (inline or path)")->required();
    sc_res->add_option("--delta", delta, "discretization step")->required();
    sc_res->add_option("--horizon", horizon, "time horizon")->required();
    sc_res->add_option("--tol", tol, "series tail tolerance");
    sc_res->add_option("--grid", grid, "number of output samples")
        ->check(CLI::Range(2, 100000000));
    sc_res->add_option("--out", out_path, "output CSV path")->required();

    auto* sc_solve = app.add_subcommand("solve", "evaluate y = f + h*f");
    sc_solve->add_option("--kernel", kernel_arg, "kernel JSON (inline or path)")->required();
    sc_solve->add_option("--delta", delta, "discretization step")->required();
    sc_solve->add_option("--horizon", horizon, "time horizon")->required();
    sc_solve->add_option("--tol", tol, "series tail tolerance");
    sc_solve->add_option("--signal", signal_arg, "input signal JSON (inline or path)")
        ->required();
    sc_solve->add_option("--step", step, "output grid step (default: delta)");
    sc_solve->add_option("--out", out_path, "output CSV path")->required();

    auto* sc_cert = app.add_subcommand("certify", "error certificate JSON");
    sc_cert->add_option("--kernel", kernel_arg, "kernel JSON (inline or path)")->required();
    sc_cert->add_option("--delta", delta, "discretization step")->required();
    sc_cert->add_option("--horizon", horizon, "time horizon")->required();
    sc_cert->add_option("--f-mass", f_mass, "L1 mass of the input signal");
    sc_cert->add_option("--window", window, "report the bound on [0, window]");
    sc_cert->add_option("--out", out_path, "output path (default: stdout)");

    auto* sc_val = app.add_subcommand("validate", "check against direct quadrature");
    sc_val->add_option("--kernel", kernel_arg, "kernel JSON (inline or path)")->required();
    sc_val->add_option("--delta", delta, "discretization step")->required();
    sc_val->add_option("--horizon", horizon, "time horizon")->required();
    sc_val->add_option("--tol", tol, "series tail tolerance");
    sc_val->add_option("--step", step, "oracle quadrature step")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc_gamma->parsed()) return cmd_gamma_table(nmax, grid, out_path);
        if (sc_beta->parsed()) return cmd_beta(kernel_arg, delta, horizon, depth, out_path);
        if (sc_res->parsed())
            return cmd_resolvent(kernel_arg, delta, horizon, tol, grid, out_path);
        if (sc_solve->parsed())
            return cmd_solve(kernel_arg, delta, horizon, tol, signal_arg, step, out_path);
        if (sc_cert->parsed())
            return cmd_certify(kernel_arg, delta, horizon, f_mass, window, out_path);
        if (sc_val->parsed()) return cmd_validate(kernel_arg, delta, horizon, tol, step);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
