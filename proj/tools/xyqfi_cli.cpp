// Command-line front end.
//
//   point           breakdown of the QFI at a single parameter point (JSON)
//   scan            grid sweep driven by a JSON config, written as CSV
//   ratio           product-state / finite-size QFI ratio at a point
//   subdivision     finite-size regression: bulk free energy, offset, a = E/U
//   phase-boundary  dressed critical field for the current bath coupling
//   verify          self-verification suite (fast | full), exit 0 iff clean
//
// Validation failures exit 1 with the reason on stderr; scan I/O or compute
// failures exit 2.

#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <xyqfi/fisher.hpp>
#include <xyqfi/sweep.hpp>
#include <xyqfi/verify.hpp>

namespace {

using nlohmann::ordered_json;
using namespace xyqfi;

struct PointFlags {
    int n = 8;
    double j = 1.0, gamma = 1.0, h = 0.0, beta = 1.0, g = 0.0, omega_c = 1.0;
    std::string regime = "weak", parameter = "h", config;
    bool finite_size = true;
};

void add_point_flags(CLI::App* cmd, PointFlags& f) {
    // the transverse field is spelled --h, so help must not claim -h
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--n", f.n, "number of spins (even, >= 2)");
    cmd->add_option("--j", f.j, "exchange coupling");
    cmd->add_option("--gamma", f.gamma, "anisotropy in [0, 1]");
    cmd->add_option("--h", f.h, "transverse field");
    cmd->add_option("--beta", f.beta, "inverse temperature (> 0)");
    cmd->add_option("--g", f.g, "bath coupling strength");
    cmd->add_option("--omega-c", f.omega_c, "bath cutoff frequency");
    cmd->add_option("--regime", f.regime, "coupling regime")
        ->check(CLI::IsMember({"weak", "strong"}));
    cmd->add_option("--parameter", f.parameter, "estimated parameter")
        ->check(CLI::IsMember({"h", "beta"}));
    cmd->add_flag("--finite-size,!--product-state", f.finite_size,
                  "parity-projected partition function (default) vs product-state approximation");
    cmd->add_option("--config", f.config, "JSON config supplying defaults; flags win")
        ->check(CLI::ExistingFile);
}

// config acts as a source of defaults only: any flag given on the command line
// keeps its value
void overlay_config(const CLI::App* cmd, PointFlags& f) {
    if (f.config.empty()) return;
    SweepConfig c = load_sweep_config(f.config);
    if (c.h.ranged() || c.beta.ranged())
        throw std::invalid_argument("single-point commands need scalar beta and h in the config");
    if (!cmd->count("--n")) f.n = c.n;
    if (!cmd->count("--j")) f.j = c.j;
    if (!cmd->count("--gamma")) f.gamma = c.gamma;
    if (!cmd->count("--h")) f.h = c.h.min;
    if (!cmd->count("--beta")) f.beta = c.beta.min;
    if (!cmd->count("--g")) f.g = c.bath.g;
    if (!cmd->count("--omega-c")) f.omega_c = c.bath.omega_c;
    if (!cmd->count("--regime")) f.regime = (c.regime == Regime::weak) ? "weak" : "strong";
    if (!cmd->count("--parameter")) f.parameter = (c.parameter == Alpha::field) ? "h" : "beta";
    if (!cmd->count("--finite-size")) f.finite_size = c.finite_size;
}

struct PointInputs {
    ChainParams p;
    BathParams b;
    double beta;
    Regime regime;
    Alpha alpha;
    bool finite_size;
};

PointInputs materialize(const PointFlags& f) {
    PointInputs in{ChainParams{f.n, f.j, f.gamma, f.h},
                   BathParams{f.g, f.omega_c},
                   f.beta,
                   f.regime == "strong" ? Regime::strong : Regime::weak,
                   f.parameter == "beta" ? Alpha::temperature : Alpha::field,
                   f.finite_size};
    in.p.validate();
    in.b.validate();
    if (in.beta <= 0.0) throw std::invalid_argument("beta must be > 0");
    return in;
}

int run_point(const PointFlags& f) {
    PointInputs in = materialize(f);
    QfiBreakdown r = qfi_total(in.p, in.b, in.beta, in.alpha, in.regime,
                               {in.finite_size, false, false});
    SpectrumContext ctx = build_spectrum(in.p, in.b, in.beta, in.alpha, in.regime);
    ordered_json out{{"qfi_psi_dd", r.psi_dd},
                     {"qfi_tilde", r.tilde_c},
                     {"qfi_quantum", r.quantum},
                     {"qfi_total", r.total},
                     {"decay_factor", ctx.renorm.c_avg.v},
                     {"h_eff", ctx.renorm.h_flat.v},
                     {"gamma_eff", ctx.renorm.gamma_flat.v},
                     {"j_eff", ctx.renorm.j_flat.v},
                     {"log_partition", log_partition(ctx, {in.finite_size, false})}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_ratio(const PointFlags& f) {
    PointInputs in = materialize(f);
    ordered_json out{{"ratio_ppa", ratio_ppa(in.p, in.b, in.beta, in.alpha, in.regime)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_subdivision(const PointFlags& f, std::vector<int> sizes) {
    PointInputs in = materialize(f);
    if (sizes.empty()) sizes = default_subdivision_sizes();
    SubdivisionResult sr = subdivision_regression(in.p, in.b, in.beta, in.regime, sizes);
    const char* source = sr.source == SubdivisionSource::bare        ? "bare"
                         : sr.source == SubdivisionSource::effective ? "effective"
                                                                     : "microscopic";
    ordered_json out{{"regression",
                      ordered_json{{"f_bulk", sr.f_bulk},
                                   {"e_sub", sr.e_sub},
                                   {"a_ratio", sr.a_ratio},
                                   {"residual", sr.residual},
                                   {"source", source},
                                   {"sizes", sr.sizes}}}};
    if (in.regime == Regime::strong)
        out["microscopic"] = microscopic_subdivision(in.p, in.b, in.beta, in.regime);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_phase_boundary(const PointFlags& f) {
    PointInputs in = materialize(f);
    ordered_json out{{"h_star", phase_boundary_h(in.p, in.b, in.beta)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_scan(const std::string& config, const std::string& output, int threads) {
    SweepConfig cfg = load_sweep_config(config);
    if (!output.empty()) cfg.output = output;
    std::vector<SweepRow> rows = run_sweep(cfg, threads);
    write_csv_file(cfg.output, cfg, rows);
    std::cout << "wrote " << cfg.output << " (" << rows.size() << " rows)\n";
    return 0;
}

int run_verify(const std::string& level, std::uint64_t seed, double perturb) {
    debug_energy_shift = perturb;
    std::vector<verify::CheckResult> results =
        verify::run_acceptance(level == "fast" ? verify::Level::fast : verify::Level::full, seed);
    return verify::report(results, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QFI bounds for a dissipative anisotropic XY chain"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);

    PointFlags pf, rf, sf, bf;
    CLI::App* point = app.add_subcommand("point", "QFI breakdown at one parameter point");
    add_point_flags(point, pf);
    CLI::App* ratio = app.add_subcommand("ratio", "product-state / finite-size QFI ratio");
    add_point_flags(ratio, rf);
    CLI::App* subdivision =
        app.add_subcommand("subdivision", "finite-size regression of the free energy");
    add_point_flags(subdivision, sf);
    std::vector<int> sizes;
    subdivision->add_option("--sizes", sizes, "chain lengths for the regression (even, >= 2 values)");
    CLI::App* boundary =
        app.add_subcommand("phase-boundary", "dressed critical field at this coupling");
    add_point_flags(boundary, bf);

    std::string scan_config, scan_output;
    int scan_threads = 0;
    CLI::App* scan = app.add_subcommand("scan", "grid sweep to CSV");
    scan->add_option("--config", scan_config, "JSON sweep description")
        ->required()
        ->check(CLI::ExistingFile);
    scan->add_option("--output", scan_output, "override the output path in the config");
    scan->add_option("--threads", scan_threads, "worker threads (default: env, then hardware)");

    std::string verify_level = "full";
    std::uint64_t verify_seed = 20240;
    double verify_perturb = 0.0;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the self-verification suite");
    verify_cmd->add_option("level", verify_level, "fast | full")
        ->check(CLI::IsMember({"fast", "full"}));
    verify_cmd->add_option("--seed", verify_seed, "seed for randomized comparison points");
    verify_cmd
        ->add_option("--perturb-epsilon", verify_perturb,
                     "debug: bias every mode energy by this amount (the suite must then fail)")
        ->group("");  // hidden: not part of normal operation

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (point->parsed()) {
            overlay_config(point, pf);
            return run_point(pf);
        }
        if (ratio->parsed()) {
            overlay_config(ratio, rf);
            return run_ratio(rf);
        }
        if (subdivision->parsed()) {
            overlay_config(subdivision, sf);
            return run_subdivision(sf, sizes);
        }
        if (boundary->parsed()) {
            overlay_config(boundary, bf);
            return run_phase_boundary(bf);
        }
        if (scan->parsed()) return run_scan(scan_config, scan_output, scan_threads);
        if (verify_cmd->parsed()) return run_verify(verify_level, verify_seed, verify_perturb);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return scan->parsed() ? 2 : 1;
    }
    return 0;
}
