// bistab CLI — variational steady states of driven-dissipative spin lattices:
// norm evaluation, landscape minima/saddles, droplet relaxation rates,
// Langevin ensembles, and phase-diagram sweeps. Every run writes delimited
// tables plus a reproducibility manifest into the output directory.

#include "bistab/emit.hpp"
#include "bistab/errors.hpp"
#include "bistab/exactref.hpp"
#include "bistab/gradexp.hpp"
#include "bistab/landscape.hpp"
#include "bistab/langevin.hpp"
#include "bistab/models.hpp"
#include "bistab/nucleation.hpp"
#include "bistab/phasediag.hpp"
#include "bistab/profile.hpp"
#include "bistab/varnorm.hpp"

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace fs = std::filesystem;
using namespace bistab;

namespace {

struct GlobalArgs {
    std::string out_dir = "out";
    int threads = 0;
    std::uint64_t seed = 20220901;
};

struct ModelArgs {
    std::string model = "ising";
    double g = 1.0;
    double J = 0.0;
    double gamma = 1.0;
    double T = 0.5;
    double h = 0.0;
    double Omega = 0.0;
    std::string mapping = "linear";
};

void add_model_flags(CLI::App* cmd, ModelArgs& m) {
    cmd->set_help_flag("--help", "Print help");  // frees -h for the bias flag
    cmd->add_option("--model", m.model, "Model: ising | toom | toom-quantum")
        ->capture_default_str();
    cmd->add_option("--g", m.g, "Transverse field strength (ising)")->capture_default_str();
    cmd->add_option("--J", m.J, "Ising coupling")->capture_default_str();
    cmd->add_option("--gamma", m.gamma, "Global dissipation rate")->capture_default_str();
    cmd->add_option("--T", m.T, "Toom noise amplitude, in [0, 2]")->capture_default_str();
    cmd->add_option("--h", m.h, "Toom bias, in [-1, 1]")->capture_default_str();
    cmd->add_option("--Omega", m.Omega, "Coherent drive strength (toom-quantum)")
        ->capture_default_str();
    cmd->add_option("--mapping", m.mapping, "Toom rate mapping: linear | exponential")
        ->capture_default_str();
}

LatticeModel build_model(const ModelArgs& m) {
    if (m.model == "ising") return build_ising(m.g, m.J, m.gamma);
    const RateMapping map = rate_mapping_from_string(m.mapping);
    if (m.model == "toom") return build_toom_classical(m.T, m.h, m.gamma, map);
    if (m.model == "toom-quantum")
        return build_toom_quantum(m.T, m.h, m.Omega, m.gamma, map);
    throw std::invalid_argument("unknown model '" + m.model + "'");
}

ToomPointSpec toom_spec(const ModelArgs& m) {
    ToomPointSpec s;
    s.quantum = m.model == "toom-quantum";
    s.T = m.T;
    s.h = m.h;
    s.Omega = m.Omega;
    s.gamma = m.gamma;
    s.mapping = rate_mapping_from_string(m.mapping);
    return s;
}

struct EnsembleArgs {
    int L = 20;
    int side = 10;
    int samples = 100;
    double t_max = 1000.0;
    double dt = 0.0;
    double threshold = 0.5;
    int f0_grid = 401;
    std::string drift_mode = "eom";
    std::string noise_mode = "constant";
};

void add_ensemble_flags(CLI::App* cmd, EnsembleArgs& e) {
    cmd->add_option("--L", e.L, "Lattice side length")->capture_default_str();
    cmd->add_option("--side", e.side, "Island leg length")->capture_default_str();
    cmd->add_option("--samples", e.samples, "Ensemble size")->capture_default_str();
    cmd->add_option("--t-max", e.t_max, "Integration time")->capture_default_str();
    cmd->add_option("--dt", e.dt, "Time step (0 = stability default)")->capture_default_str();
    cmd->add_option("--threshold", e.threshold, "Bistability threshold on retain fraction")
        ->capture_default_str();
    cmd->add_option("--f0-grid", e.f0_grid, "Knot count of the f0 profile")
        ->capture_default_str();
    cmd->add_option("--drift-mode", e.drift_mode, "Drift stencil: eom | exact")
        ->capture_default_str();
    cmd->add_option("--noise-mode", e.noise_mode, "Noise amplitude: constant | local")
        ->capture_default_str();
}

PipelineOptions pipeline_options(const EnsembleArgs& e, std::uint64_t seed) {
    PipelineOptions opt;
    opt.L = e.L;
    opt.side = e.side;
    opt.n_samples = e.samples;
    opt.f0_grid_n = e.f0_grid;
    opt.classify_threshold = e.threshold;
    opt.seed = seed;
    opt.langevin.t_max = e.t_max;
    opt.langevin.dt = e.dt;
    opt.langevin.drift_mode =
        e.drift_mode == "exact" ? DriftMode::exact_functional : DriftMode::eq_of_motion;
    opt.langevin.noise_mode =
        e.noise_mode == "local" ? NoiseMode::local : NoiseMode::constant;
    return opt;
}

BlochVector parse_alpha(const std::vector<double>& v) {
    if (v.size() != 3) throw std::invalid_argument("--alpha needs three components");
    return BlochVector{v[0], v[1], v[2]};
}

// ---------------------------------------------------------------------------

int run_verify(std::uint64_t seed) {
    struct Block {
        std::string name;
        double max_dev = 0.0;
        double tol = 0.0;
    };
    std::vector<Block> blocks;

    auto oracle_sweep = [&](const std::string& name, const LatticeModel& model) {
        const NormEvaluator ev(model);
        std::mt19937_64 gen(mix64(seed, std::hash<std::string>{}(name)));
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        double max_dev = 0.0;
        for (int k = 0; k < 50; ++k) {
            BlochVector a;
            do {
                a = BlochVector{uni(gen), uni(gen), uni(gen)};
            } while (a.norm2() > 1.0);
            for (const auto& cfg : ev.pairs()) {
                const Complex engine = ev.pair_term(a, cfg);
                const Complex dense = dense_pair_oracle(a, cfg, ev.model());
                max_dev = std::max(max_dev, std::abs(engine - dense));
            }
        }
        blocks.push_back({name + " pair terms vs dense oracle", max_dev, 1e-10});
    };
    oracle_sweep("ising", build_ising(5.4, 5.0, 1.0));
    oracle_sweep("toom", build_toom_classical(0.75, 0.1, 1.0));
    oracle_sweep("toom-quantum", build_toom_quantum(0.75, 0.1, 0.3, 1.0));

    {
        // patch reconstruction against the engine's pair sum
        double max_dev = 0.0;
        auto patch_check = [&](const LatticeModel& model, const BlochVector& a, int nx, int ny) {
            const NormEvaluator ev(model);
            const Patch patch = Patch::rectangle(nx, ny);
            const double dense = dense_patch_norm(model, a, patch);
            const double engine = ev.patch_pair_sum(a, patch.sites);
            max_dev = std::max(max_dev, std::abs(dense - engine));
        };
        patch_check(build_ising(0.0, 0.0, 1.0), BlochVector{0, 0, 1}, 2, 2);
        patch_check(build_ising(1.3, 0.7, 1.0), BlochVector{0.2, -0.3, 0.4}, 2, 2);
        patch_check(build_ising(1.3, 0.7, 1.0), BlochVector{0.2, -0.3, 0.4}, 3, 3);
        patch_check(build_toom_classical(0.75, 0.1, 1.0), BlochVector{0, 0, 0.5}, 2, 2);
        patch_check(build_toom_classical(0.75, 0.1, 1.0), BlochVector{0, 0, 0.5}, 3, 3);
        blocks.push_back({"patch norm reconstruction", max_dev, 1e-9});
    }
    {
        double max_dev = 0.0;
        const NormEvaluator dark(build_ising(0.0, 4.0, 1.0));
        max_dev = std::max(max_dev, dark.value(BlochVector{0, 0, -1}));
        const NormEvaluator toom0(build_toom_classical(0.0, 0.3, 1.0));
        max_dev = std::max(max_dev, toom0.value(BlochVector{0, 0, 1}));
        max_dev = std::max(max_dev, toom0.value(BlochVector{0, 0, -1}));
        const NormEvaluator single(build_ising(1.0, 0.0, 1.0));
        max_dev = std::max(max_dev, single.value(single_site_steady(1.0, 1.0)));
        blocks.push_back({"exact steady states f_v", max_dev, 1e-10});
    }

    bool ok = true;
    for (const auto& b : blocks) {
        const bool pass = b.max_dev <= b.tol;
        ok = ok && pass;
        std::cout << (pass ? "PASS " : "FAIL ") << b.name << ": max deviation "
                  << format_g17(b.max_dev) << " (tol " << format_g17(b.tol) << ")\n";
    }
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variational steady states, metastability, and phase diagrams "
                 "of driven-dissipative spin lattices"};
    app.require_subcommand(1);
    app.fallthrough(true);  // global flags usable after the subcommand
    app.allow_config_extras(false);
    app.set_config("--config", "", "INI config file (flags override file values)");

    GlobalArgs gl;
    app.add_option("--out-dir", gl.out_dir, "Output directory")->capture_default_str();
    app.add_option("--threads", gl.threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
    app.add_option("--seed", gl.seed, "Master seed (64-bit)")->capture_default_str();

    // --- norm ---
    auto* norm_cmd = app.add_subcommand("norm", "Evaluate f_v at one ansatz point");
    ModelArgs norm_model;
    add_model_flags(norm_cmd, norm_model);
    std::vector<double> norm_alpha{0.0, 0.0, 0.0};
    norm_cmd->add_option("--alpha", norm_alpha, "Bloch vector a_x,a_y,a_z")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();

    // --- minimize ---
    auto* min_cmd = app.add_subcommand("minimize", "Locate all local minima of f_v");
    ModelArgs min_model;
    add_model_flags(min_cmd, min_model);

    // --- saddle ---
    auto* sad_cmd =
        app.add_subcommand("saddle", "Stable/metastable minima and the intermediate saddle");
    ModelArgs sad_model;
    add_model_flags(sad_cmd, sad_model);

    // --- scan ---
    auto* scan_cmd = app.add_subcommand("scan", "f_v on an affine plane grid");
    ModelArgs scan_model;
    add_model_flags(scan_cmd, scan_model);
    std::vector<double> scan_p0{0, 0, 0}, scan_e1{0, 0, 1}, scan_e2{0, 1, 0};
    int scan_n1 = 81, scan_n2 = 81;
    std::vector<double> scan_urange{-1.0, 1.0}, scan_vrange{-1.0, 1.0};
    scan_cmd->add_option("--p0", scan_p0, "Plane origin")->delimiter(',')->expected(3)
        ->capture_default_str();
    scan_cmd->add_option("--e1", scan_e1, "First in-plane axis")->delimiter(',')->expected(3)
        ->capture_default_str();
    scan_cmd->add_option("--e2", scan_e2, "Second in-plane axis")->delimiter(',')->expected(3)
        ->capture_default_str();
    scan_cmd->add_option("--n1", scan_n1, "Grid points along e1")->capture_default_str();
    scan_cmd->add_option("--n2", scan_n2, "Grid points along e2")->capture_default_str();
    scan_cmd->add_option("--u-range", scan_urange, "u range")->delimiter(',')->expected(2)
        ->capture_default_str();
    scan_cmd->add_option("--v-range", scan_vrange, "v range")->delimiter(',')->expected(2)
        ->capture_default_str();

    // --- transition ---
    auto* tr_cmd = app.add_subcommand("transition", "Ising first-order point in g/gamma");
    double tr_J = 5.0, tr_gamma = 1.0, tr_glo = 5.0, tr_ghi = 5.8, tr_tol = 1e-3;
    tr_cmd->add_option("--J", tr_J, "Ising coupling")->capture_default_str();
    tr_cmd->add_option("--gamma", tr_gamma, "Dissipation rate")->capture_default_str();
    tr_cmd->add_option("--g-lo", tr_glo, "Bracket lower end")->capture_default_str();
    tr_cmd->add_option("--g-hi", tr_ghi, "Bracket upper end")->capture_default_str();
    tr_cmd->add_option("--tol", tr_tol, "Bisection tolerance")->capture_default_str();

    // --- rate ---
    auto* rate_cmd =
        app.add_subcommand("rate", "Droplet activation and relaxation rate from norm values");
    double rate_fs = 0.1, rate_fm = 0.2, rate_fsp = 0.4;
    rate_cmd->add_option("--f-s", rate_fs, "Stable-minimum norm")->capture_default_str();
    rate_cmd->add_option("--f-m", rate_fm, "Metastable-minimum norm")->capture_default_str();
    rate_cmd->add_option("--f-sp", rate_fsp, "Saddle norm")->capture_default_str();

    // --- rate-curve ---
    auto* rc_cmd = app.add_subcommand("rate-curve", "Relaxation rate across a g/gamma scan");
    double rc_J = 5.0, rc_gamma = 1.0, rc_glo = 5.0, rc_ghi = 5.8;
    int rc_n = 17;
    rc_cmd->add_option("--J", rc_J, "Ising coupling")->capture_default_str();
    rc_cmd->add_option("--gamma", rc_gamma, "Dissipation rate")->capture_default_str();
    rc_cmd->add_option("--g-lo", rc_glo, "Scan lower end")->capture_default_str();
    rc_cmd->add_option("--g-hi", rc_ghi, "Scan upper end")->capture_default_str();
    rc_cmd->add_option("--n", rc_n, "Grid points")->capture_default_str();

    // --- coeffs ---
    auto* co_cmd = app.add_subcommand("coeffs", "Gradient-expansion coefficients");
    ModelArgs co_model;
    co_model.model = "toom";
    add_model_flags(co_cmd, co_model);
    int co_grid = 401;
    co_cmd->add_option("--f0-grid", co_grid, "Knot count of the f0 profile")
        ->capture_default_str();

    // --- langevin ---
    auto* lv_cmd = app.add_subcommand("langevin", "Field-lattice ensemble run");
    ModelArgs lv_model;
    lv_model.model = "toom";
    add_model_flags(lv_cmd, lv_model);
    EnsembleArgs lv_ens;
    add_ensemble_flags(lv_cmd, lv_ens);
    double lv_a = 0.0, lv_b = 0.0, lv_bp = 0.0, lv_c = 0.0, lv_noise = -1.0;
    std::vector<double> lv_f0_poly;
    double lv_phi_island = 0.0, lv_phi_bulk = 0.0;
    lv_cmd->add_option("--a", lv_a, "Coefficient override: a")->capture_default_str();
    lv_cmd->add_option("--b", lv_b, "Coefficient override: b")->capture_default_str();
    lv_cmd->add_option("--b-prime", lv_bp, "Coefficient override: b'")->capture_default_str();
    lv_cmd->add_option("--c", lv_c, "Coefficient override: c")->capture_default_str();
    lv_cmd->add_option("--noise-amp", lv_noise, "Noise amplitude override (>= 0)")
        ->capture_default_str();
    lv_cmd->add_option("--f0-poly", lv_f0_poly,
                       "Polynomial f0 override, coefficients c0,c1,... (enables override mode)")
        ->delimiter(',');
    lv_cmd->add_option("--phi-island", lv_phi_island, "Island field (override mode)")
        ->capture_default_str();
    lv_cmd->add_option("--phi-bulk", lv_phi_bulk, "Bulk field (override mode)")
        ->capture_default_str();

    // --- phasediag ---
    auto* pd_cmd = app.add_subcommand("phasediag", "Bistable/ergodic sweep and critical point");
    ModelArgs pd_model;
    pd_model.model = "toom";
    add_model_flags(pd_cmd, pd_model);
    EnsembleArgs pd_ens;
    add_ensemble_flags(pd_cmd, pd_ens);
    std::string pd_plane = "T-h";
    double pd_xlo = 0.5, pd_xhi = 1.0;
    int pd_nx = 21;
    double pd_hlo = -0.05, pd_hhi = 0.05;
    int pd_nh = 21;
    bool pd_critical = false;
    double pd_clo = 0.5, pd_chi = 1.0, pd_ctol = 0.01;
    bool pd_refine = false;
    double pd_rtol = 0.005;
    pd_cmd->add_option("--plane", pd_plane, "Sweep plane: T-h | Omega-h")->capture_default_str();
    pd_cmd->add_option("--x-lo", pd_xlo, "First-axis lower end")->capture_default_str();
    pd_cmd->add_option("--x-hi", pd_xhi, "First-axis upper end")->capture_default_str();
    pd_cmd->add_option("--nx", pd_nx, "First-axis points")->capture_default_str();
    pd_cmd->add_option("--h-lo", pd_hlo, "Bias lower end")->capture_default_str();
    pd_cmd->add_option("--h-hi", pd_hhi, "Bias upper end")->capture_default_str();
    pd_cmd->add_option("--nh", pd_nh, "Bias points")->capture_default_str();
    pd_cmd->add_flag("--critical", pd_critical, "Locate the h = 0 critical point");
    pd_cmd->add_option("--crit-lo", pd_clo, "Critical bracket lower end")->capture_default_str();
    pd_cmd->add_option("--crit-hi", pd_chi, "Critical bracket upper end")->capture_default_str();
    pd_cmd->add_option("--crit-tol", pd_ctol, "Critical bisection tolerance")
        ->capture_default_str();
    pd_cmd->add_flag("--refine", pd_refine, "Bisect h-boundaries found on the grid");
    pd_cmd->add_option("--refine-tol", pd_rtol, "Boundary bisection tolerance")
        ->capture_default_str();

    // --- verify ---
    auto* vf_cmd = app.add_subcommand("verify", "Dense-oracle verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

#ifdef _OPENMP
    if (gl.threads > 0) omp_set_num_threads(gl.threads);
#endif

    const auto t_start = std::chrono::steady_clock::now();
    try {
        fs::create_directories(gl.out_dir);
        const fs::path dir(gl.out_dir);
        std::vector<OutputRecord> outputs;
        std::string subname;

        auto finish = [&](const std::string& name) {
            subname = name;
            const std::string cfg = app.config_to_str(true, false);
            {
                std::ofstream out(dir / "resolved.cfg", std::ios::binary);
                out << cfg;
            }
            outputs.push_back(record_output(dir / "resolved.cfg"));
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                    .count();
            write_manifest(dir, name, cfg, secs, outputs);
        };

        if (norm_cmd->parsed()) {
            const NormEvaluator ev(build_model(norm_model));
            const NormValue nv = ev.f_v(parse_alpha(norm_alpha));
            std::cout << "f_v = " << format_g17(nv.value)
                      << "  overlap_part = " << format_g17(nv.overlap_part)
                      << "  disjoint_part = " << format_g17(nv.disjoint_part) << "\n";
            Table t({"value", "overlap_part", "disjoint_part"});
            t.add_numeric_row({nv.value, nv.overlap_part, nv.disjoint_part});
            t.write_csv(dir / "norm.csv");
            outputs.push_back(record_output(dir / "norm.csv"));
            finish("norm");
        } else if (min_cmd->parsed()) {
            const NormEvaluator ev(build_model(min_model));
            const auto minima = find_minima(ev);
            Table t({"alpha_x", "alpha_y", "alpha_z", "f_v"});
            for (const auto& m : minima) {
                t.add_numeric_row({m.alpha.x, m.alpha.y, m.alpha.z, m.f_v});
                std::cout << "minimum (" << format_g17(m.alpha.x) << ", "
                          << format_g17(m.alpha.y) << ", " << format_g17(m.alpha.z)
                          << ")  f_v = " << format_g17(m.f_v) << "\n";
            }
            t.write_csv(dir / "minima.csv");
            outputs.push_back(record_output(dir / "minima.csv"));
            finish("minimize");
        } else if (sad_cmd->parsed()) {
            const NormEvaluator ev(build_model(sad_model));
            const CriticalProfile cp = critical_profile(ev);
            Table t({"role", "alpha_x", "alpha_y", "alpha_z", "f_v"});
            auto row = [&](const char* role, const BlochVector& a, double f) {
                t.add_row({role, format_g17(a.x), format_g17(a.y), format_g17(a.z),
                           format_g17(f)});
                std::cout << role << ": (" << format_g17(a.x) << ", " << format_g17(a.y)
                          << ", " << format_g17(a.z) << ")  f_v = " << format_g17(f) << "\n";
            };
            row("stable", cp.stable, cp.f_stable);
            row("metastable", cp.metastable, cp.f_metastable);
            row("saddle", cp.saddle, cp.f_saddle);
            t.write_csv(dir / "critical_profile.csv");
            outputs.push_back(record_output(dir / "critical_profile.csv"));
            finish("saddle");
        } else if (scan_cmd->parsed()) {
            const NormEvaluator ev(build_model(scan_model));
            const Eigen::Vector3d p0(scan_p0[0], scan_p0[1], scan_p0[2]);
            const Eigen::Vector3d e1(scan_e1[0], scan_e1[1], scan_e1[2]);
            const Eigen::Vector3d e2(scan_e2[0], scan_e2[1], scan_e2[2]);
            const PlaneScan scan = scan_plane(ev, p0, e1, e2, scan_n1, scan_n2, scan_urange[0],
                                              scan_urange[1], scan_vrange[0], scan_vrange[1]);
            Table t({"u", "v", "alpha_x", "alpha_y", "alpha_z", "f_v"});
            for (int i = 0; i < scan_n1; ++i)
                for (int j = 0; j < scan_n2; ++j) {
                    const Eigen::Vector3d x = p0 + scan.u[i] * e1 + scan.v[j] * e2;
                    t.add_numeric_row(
                        {scan.u[i], scan.v[j], x[0], x[1], x[2], scan.values(i, j)});
                }
            t.write_csv(dir / "scan.csv");
            outputs.push_back(record_output(dir / "scan.csv"));
            std::cout << "scan: " << scan_n1 << " x " << scan_n2 << " grid written\n";
            finish("scan");
        } else if (tr_cmd->parsed()) {
            const double g = locate_first_order(tr_J, tr_gamma, tr_glo, tr_ghi, tr_tol);
            std::cout << "first-order transition at g/gamma = " << format_g17(g / tr_gamma)
                      << " (tol " << format_g17(tr_tol) << ")\n";
            Table t({"J_over_gamma", "g_over_gamma", "tol"});
            t.add_numeric_row({tr_J / tr_gamma, g / tr_gamma, tr_tol});
            t.write_csv(dir / "transition.csv");
            outputs.push_back(record_output(dir / "transition.csv"));
            finish("transition");
        } else if (rate_cmd->parsed()) {
            const NucleationResult nr = activation(rate_fs, rate_fm, rate_fsp);
            const double I = relaxation_rate(rate_fs, rate_fm, rate_fsp);
            const double l10 = log10_relaxation_rate(rate_fs, rate_fm, rate_fsp);
            std::cout << "ell_star = " << format_g17(nr.ell_star)
                      << "  E_a = " << format_g17(nr.activation_energy)
                      << "  lambda = " << format_g17(nr.lambda)
                      << "  I = " << format_g17(I) << " (per site, units of gamma)\n";
            Table t({"f_s", "f_m", "f_sp", "ell_star", "E_a", "lambda",
                     "I_per_site_gamma", "log10_I"});
            t.add_numeric_row(
                {rate_fs, rate_fm, rate_fsp, nr.ell_star, nr.activation_energy, nr.lambda, I,
                 l10});
            t.write_csv(dir / "rate.csv");
            outputs.push_back(record_output(dir / "rate.csv"));
            finish("rate");
        } else if (rc_cmd->parsed()) {
            const auto rows = rate_curve(rc_J, rc_gamma, rc_glo, rc_ghi, rc_n);
            Table t({"g_over_gamma", "f_s", "f_m", "f_sp", "log10_I"});
            for (const auto& r : rows) {
                if (r.valid)
                    t.add_numeric_row({r.g_over_gamma, r.f_s, r.f_m, r.f_sp, r.log10_rate});
                else
                    t.add_row({format_g17(r.g_over_gamma), "nan", "nan", "nan", "nan"});
            }
            t.write_csv(dir / "rate_curve.csv");
            outputs.push_back(record_output(dir / "rate_curve.csv"));
            std::cout << "rate-curve: " << rows.size() << " rows written\n";
            finish("rate-curve");
        } else if (co_cmd->parsed()) {
            const ToomPointSpec spec = toom_spec(co_model);
            PipelineOptions opt;
            opt.f0_grid_n = co_grid;
            opt.seed = gl.seed;
            const NormEvaluator ev(build_model(co_model));
            const auto minima = find_minima(ev);
            if (minima.size() < 2)
                throw NumericalError("coeffs: single-minimum landscape (no metastable branch)");
            Minimum stable = minima[0], meta = minima[1];
            const FieldRotation rot = rotate_to_field(stable.alpha, meta.alpha);
            if (spec.h == 0.0 && rot.phi_of(meta.alpha) < rot.phi_of(stable.alpha))
                std::swap(stable, meta);
            const double ps = rot.phi_of(stable.alpha), pm = rot.phi_of(meta.alpha);
            const Profile f0 = effective_f0(ev, rot, default_phi_grid(ps, pm, co_grid));
            const LangevinCoeffs lc = extract_coeffs(ev, rot, f0, ps, pm);
            std::cout << "a = " << format_g17(lc.a) << "  b = " << format_g17(lc.b)
                      << "  b' = " << format_g17(lc.b_prime) << "  c = " << format_g17(lc.c)
                      << "  f0(stable) = " << format_g17(lc.f0_stable)
                      << "  f0(metastable) = " << format_g17(lc.f0_meta) << "\n";
            Table t({"T", "h", "Omega", "a", "b", "b_prime", "c", "f0_min_stable",
                     "f0_min_metastable"});
            t.add_numeric_row({spec.T, spec.h, spec.Omega, lc.a, lc.b, lc.b_prime, lc.c,
                               lc.f0_stable, lc.f0_meta});
            t.write_csv(dir / "coeffs.csv");
            outputs.push_back(record_output(dir / "coeffs.csv"));
            finish("coeffs");
        } else if (lv_cmd->parsed()) {
            EnsembleStats stats;
            if (!lv_f0_poly.empty()) {
                // override mode: explicit coefficients, polynomial f0
                LangevinCoeffs lc;
                lc.a = lv_a;
                lc.b = lv_b;
                lc.b_prime = lv_bp;
                lc.c = lv_c;
                const int n_knots = 401;
                std::vector<double> xs(n_knots), ys(n_knots);
                for (int k = 0; k < n_knots; ++k) {
                    xs[k] = -1.0 + 2.0 * k / (n_knots - 1);
                    double acc = 0.0, pw = 1.0;
                    for (const double ck : lv_f0_poly) {
                        acc += ck * pw;
                        pw *= xs[k];
                    }
                    ys[k] = acc;
                }
                lc.f0 = Profile(xs, ys);
                lc.noise_amp = std::max(lv_noise, 0.0);
                lc.phi_stable = lv_phi_island;
                lc.phi_meta = lv_phi_bulk;
                LangevinOptions lopt = pipeline_options(lv_ens, gl.seed).langevin;
                lopt.noise_amp_override = lv_noise;
                stats = run_ensemble(lc, lv_ens.L, lv_ens.side, lv_ens.samples, gl.seed, lopt);
            } else {
                const ToomPointSpec spec = toom_spec(lv_model);
                PipelineOptions opt = pipeline_options(lv_ens, gl.seed);
                if (lv_noise >= 0.0) opt.langevin.noise_amp_override = lv_noise;
                const PointOutcome out = classify_point(spec, opt);
                if (!out.ok || out.label == "single-minimum")
                    throw NumericalError("langevin: single-minimum landscape");
                stats = out.stats;
                std::cout << "label = " << out.label << "\n";
            }
            std::cout << "stationary_mag = " << format_g17(stats.stationary_mag)
                      << "  retain_fraction = " << format_g17(stats.retain_fraction)
                      << "  dt = " << format_g17(stats.dt) << "  steps = " << stats.n_steps
                      << "\n";
            Table ts({"sample", "stationary_mag", "retained"});
            for (int s = 0; s < stats.n_samples; ++s)
                ts.add_row({std::to_string(s), format_g17(stats.sample_stationary[s]),
                            stats.sample_stationary[s] * stats.phi_bulk > 0.0 ? "1" : "0"});
            ts.write_csv(dir / "samples.csv");
            outputs.push_back(record_output(dir / "samples.csv"));
            Table tt({"t", "mean_phi"});
            for (std::size_t r = 0; r < stats.times.size(); ++r)
                tt.add_numeric_row({stats.times[r], stats.mean_trajectory[r]});
            tt.write_csv(dir / "trajectory.csv");
            outputs.push_back(record_output(dir / "trajectory.csv"));
            finish("langevin");
        } else if (pd_cmd->parsed()) {
            const std::string axis = pd_plane == "Omega-h" ? "Omega" : "T";
            ToomPointSpec base = toom_spec(pd_model);
            base.quantum = axis == "Omega" || pd_model.model == "toom-quantum";
            PipelineOptions opt = pipeline_options(pd_ens, gl.seed);

            PhaseDiagram pd = sweep(base, axis, pd_xlo, pd_xhi, pd_nx, pd_hlo, pd_hhi, pd_nh,
                                    opt);
            Table tg({"T_or_Omega", "h", "label", "retain_fraction", "n_minima"});
            for (const auto& row : pd.grid)
                tg.add_row({format_g17(row.x), format_g17(row.h), row.label,
                            format_g17(row.retain_fraction), std::to_string(row.n_minima)});
            tg.write_csv(dir / "grid.csv");
            outputs.push_back(record_output(dir / "grid.csv"));

            Table tb({"axis", "fixed_h", "value", "half_width", "evaluations"});
            if (pd_refine) {
                for (int j = 0; j < pd_nh; ++j) {
                    const double h =
                        pd_nh == 1 ? pd_hlo : pd_hlo + (pd_hhi - pd_hlo) * j / (pd_nh - 1);
                    for (int i = 0; i + 1 < pd_nx; ++i) {
                        const auto& r0 = pd.grid[static_cast<std::size_t>(i) * pd_nh + j];
                        const auto& r1 = pd.grid[static_cast<std::size_t>(i + 1) * pd_nh + j];
                        const bool b0 = r0.label == "bistable";
                        const bool b1 = r1.label == "bistable";
                        if (r0.label == "absent" || r1.label == "absent" || b0 == b1) continue;
                        ToomPointSpec line = base;
                        line.h = h;
                        try {
                            const BoundaryPoint bp =
                                locate_boundary(line, axis, r0.x, r1.x, pd_rtol, opt);
                            tb.add_row({axis, format_g17(h), format_g17(bp.value),
                                        format_g17(bp.half_width),
                                        std::to_string(bp.evaluations)});
                        } catch (const NumericalError&) {
                        }
                    }
                }
            }
            tb.write_csv(dir / "boundary.csv");
            outputs.push_back(record_output(dir / "boundary.csv"));

            if (pd_critical) {
                ToomPointSpec line = base;
                line.h = 0.0;
                const CriticalPoint cp =
                    locate_critical_point(line, axis, pd_clo, pd_chi, pd_ctol, opt);
                std::cout << "critical point: " << axis << " = " << format_g17(cp.value)
                          << " +- " << format_g17(cp.uncertainty)
                          << " (n_samples = " << cp.n_samples_used << ")\n";
                Table tc({"axis", "value", "uncertainty", "n_samples"});
                tc.add_row({axis, format_g17(cp.value), format_g17(cp.uncertainty),
                            std::to_string(cp.n_samples_used)});
                tc.write_csv(dir / "critical.csv");
                outputs.push_back(record_output(dir / "critical.csv"));
            }
            std::cout << "phasediag: " << pd.grid.size() << " grid points written\n";
            finish("phasediag");
        } else if (vf_cmd->parsed()) {
            const int code = run_verify(gl.seed);
            finish("verify");
            return code;
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
