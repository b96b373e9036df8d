// effdyn command-line front end. Subcommands mirror the library modules:
//   fidelity       channel fidelity of a serialized (U, rho_UV, U_IR) triple
//   meanfield      mu + predicted/exact fidelity sweep over theta
//   optimize       brute-force oracle vs the mean-field candidate
//   mu-dirac       dissipation error of the coarse-grained walk
//   dispersion     exact and effective dispersion relations (CSV)
//   effective-walk per-momentum effective walk blocks (JSON)
//   wavepacket     trace-distance experiment from a config file
//   selftest       full acceptance suite
//
// Exit codes: 0 success, 1 validation/input error, 2 numerical-invariant
// violation (selftest failure).

#include "effdyn/channel.hpp"
#include "effdyn/diracqw.hpp"
#include "effdyn/meanfield.hpp"
#include "effdyn/optimizer.hpp"
#include "effdyn/selftest.hpp"
#include "effdyn/serialize.hpp"
#include "effdyn/wavepacket.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <vector>

namespace {

constexpr const char* kVersion = "1.0.0";

using nlohmann::json;
using namespace effdyn;

class Stopwatch {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json manifest(const std::string& command, const json& params, std::uint64_t seed,
              const std::vector<std::string>& artifacts, double wall_ms) {
    return json{{"command", command},
                {"parameters", params},
                {"seed", seed},
                {"artifacts", artifacts},
                {"wall_ms", wall_ms},
                {"version", kVersion}};
}

// Writes JSON atomically enough for our purposes: on failure no partial
// file is left behind.
void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << j.dump(2) << "\n";
    if (!out) {
        out.close();
        std::remove(path.c_str());
        throw std::runtime_error("failed while writing output file: " + path);
    }
}

WeakCouplingFamily family_from_files(const std::string& v_ir_path,
                                     const std::string& h_mix_path, Eigen::Index d_ir,
                                     Eigen::Index d_uv) {
    WeakCouplingFamily family;
    family.d_ir = d_ir;
    family.d_uv = d_uv;
    family.v_ir = read_matrix_file(v_ir_path);
    family.v_uv = Matrix::Identity(d_uv, d_uv);
    const Matrix h = read_matrix_file(h_mix_path);
    if (h.rows() != d_ir * d_uv)
        throw std::invalid_argument("h-mix dimension does not match d_ir*d_uv");
    if (hermiticity_residual(h) > 1e-10)
        throw std::invalid_argument("h-mix must be Hermitian");
    if (family.v_ir.rows() != d_ir) throw std::invalid_argument("v-ir dimension mismatch");
    family.u_mix = [h](double t) { return exp_i_hermitian(h, t); };
    return family;
}

int run_fidelity(const std::string& u_path, const std::string& rho_path,
                 const std::string& target_path, Eigen::Index d_ir, Eigen::Index d_uv,
                 std::uint64_t seed, const std::string& out) {
    Stopwatch clock;
    const BipartiteOperator u(d_ir, d_uv, read_matrix_file(u_path));
    const DensityMatrix rho(read_matrix_file(rho_path));
    const Matrix u_ir = read_matrix_file(target_path);
    const FidelityReport report = channel_fidelity_unitary_target(u, rho, u_ir);
    json j = to_json(report, seed);
    j["manifest"] = manifest("fidelity",
                             json{{"unitary", u_path},
                                  {"rho", rho_path},
                                  {"target", target_path},
                                  {"d_ir", d_ir},
                                  {"d_uv", d_uv}},
                             seed, {out}, clock.ms());
    write_json_file(out, j);
    std::cout << "fidelity = " << report.fidelity << " (d_ir=" << d_ir << ", d_uv=" << d_uv
              << ") -> " << out << "\n";
    return 0;
}

int run_meanfield(const std::string& v_ir_path, const std::string& h_mix_path,
                  const std::string& rho_path, Eigen::Index d_ir, Eigen::Index d_uv,
                  const std::vector<double>& thetas, std::uint64_t seed,
                  const std::string& out) {
    Stopwatch clock;
    const WeakCouplingFamily family = family_from_files(v_ir_path, h_mix_path, d_ir, d_uv);
    const DensityMatrix rho(read_matrix_file(rho_path));
    const MixGenerator gen = extract_h_mix(family, 1e-4);
    json sweep = json::array();
    for (double theta : thetas) {
        const Matrix cand = effective_unitary(family.v_ir, gen, rho, theta);
        const BipartiteOperator u(d_ir, d_uv, family.full_unitary(theta));
        const double exact = channel_fidelity_unitary_target(u, rho, cand).fidelity;
        const double predicted = predicted_fidelity(gen, rho, theta);
        sweep.push_back(json{{"theta", theta},
                             {"mu_direct", mu(gen, rho, MuMethod::Direct)},
                             {"mu_correlator", mu(gen, rho, MuMethod::Correlator)},
                             {"mu_variance", mu(gen, rho, MuMethod::Variance)},
                             {"predicted_fidelity", predicted},
                             {"exact_fidelity", exact},
                             {"residual", std::abs(exact - predicted)}});
    }
    json j{{"sweep", sweep}};
    j["manifest"] = manifest("meanfield",
                             json{{"v_ir", v_ir_path},
                                  {"h_mix", h_mix_path},
                                  {"rho", rho_path},
                                  {"d_ir", d_ir},
                                  {"d_uv", d_uv},
                                  {"thetas", thetas}},
                             seed, {out}, clock.ms());
    write_json_file(out, j);
    std::cout << "meanfield sweep over " << thetas.size() << " theta values -> " << out
              << "\n";
    return 0;
}

int run_optimize(const std::string& v_ir_path, const std::string& h_mix_path,
                 const std::string& rho_path, Eigen::Index d_ir, Eigen::Index d_uv,
                 double theta, const OptimizerConfig& cfg, const std::string& out) {
    Stopwatch clock;
    const WeakCouplingFamily family = family_from_files(v_ir_path, h_mix_path, d_ir, d_uv);
    const DensityMatrix rho(read_matrix_file(rho_path));
    const MixGenerator gen = extract_h_mix(family, 1e-4);
    const Matrix cand = effective_unitary(family.v_ir, gen, rho, theta);
    const BipartiteOperator u(d_ir, d_uv, family.full_unitary(theta));
    const double f_meanfield = channel_fidelity_unitary_target(u, rho, cand).fidelity;
    const OptResult res = maximize_fidelity(u, rho, cfg, cand);
    json j{{"theta", theta},
           {"best_fidelity", res.best_fidelity},
           {"meanfield_fidelity", f_meanfield},
           {"gap", res.best_fidelity - f_meanfield},
           {"phase_aligned_distance", phase_align(res.best_unitary, cand)},
           {"iterations", res.iterations},
           {"converged", res.converged},
           {"restart_index", res.restart_index}};
    j["manifest"] = manifest("optimize",
                             json{{"v_ir", v_ir_path},
                                  {"h_mix", h_mix_path},
                                  {"rho", rho_path},
                                  {"d_ir", d_ir},
                                  {"d_uv", d_uv},
                                  {"theta", theta},
                                  {"restarts", cfg.restarts},
                                  {"max_iters", cfg.max_iters},
                                  {"initial_step", cfg.initial_step}},
                             cfg.seed, {out}, clock.ms());
    write_json_file(out, j);
    std::cout << "optimizer best fidelity " << res.best_fidelity << " vs mean-field "
              << f_meanfield << " -> " << out << "\n";
    return 0;
}

int run_mu_dirac(double rx, double ry, double rz, int half_size, std::uint64_t seed,
                 const std::string& out) {
    Stopwatch clock;
    const BlochVector r{rx, ry, rz};
    if (r.norm2() > 1.0 + 1e-12)
        throw std::invalid_argument("mu-dirac: Bloch vector must satisfy |r| <= 1");
    json j{{"r_x", rx},
           {"r_y", ry},
           {"r_z", rz},
           {"mu_closed", mu_dirac_closed(r)},
           {"mu_generic", mu_dirac_generic(r, half_size)},
           {"L", half_size}};
    j["manifest"] = manifest(
        "mu-dirac", json{{"r_x", rx}, {"r_y", ry}, {"r_z", rz}, {"L", half_size}}, seed,
        {out}, clock.ms());
    write_json_file(out, j);
    std::cout << "mu_closed = " << j["mu_closed"].get<double>()
              << ", mu_generic = " << j["mu_generic"].get<double>() << " -> " << out << "\n";
    return 0;
}

int run_dispersion(double theta, int samples, std::optional<BlochVector> r,
                   std::uint64_t seed, const std::string& out) {
    Stopwatch clock;
    if (samples < 2) throw std::invalid_argument("dispersion: samples must be >= 2");
    const int L = std::max(2, samples / 4);
    const RingWalkConfig cfg(theta, L);
    std::ofstream csv(out);
    if (!csv) throw std::runtime_error("cannot write output file: " + out);
    csv.precision(17);
    csv << "p,k,omega,omega_ir\n";
    for (int i = 0; i < samples; ++i) {
        const double k = -M_PI + 2.0 * M_PI * i / samples;
        const DispersionResult d = dispersion(cfg, r, k);
        csv << i << "," << k << "," << d.omega << ",";
        if (d.omega_ir) csv << *d.omega_ir;
        csv << "\n";
    }
    if (!csv) {
        csv.close();
        std::remove(out.c_str());
        throw std::runtime_error("failed while writing output file: " + out);
    }
    json params{{"theta", theta}, {"samples", samples}};
    if (r) params["bloch"] = json{{"r_x", r->rx}, {"r_y", r->ry}, {"r_z", r->rz}};
    write_json_file(out + ".manifest.json",
                    manifest("dispersion", params, seed, {out}, clock.ms()));
    std::cout << "dispersion: " << samples << " samples, theta=" << theta << " -> " << out
              << "\n";
    return 0;
}

int run_effective_walk(double theta, int half_size, double rx, double ry, double rz,
                       std::uint64_t seed, const std::string& out) {
    Stopwatch clock;
    const RingWalkConfig cfg(theta, half_size);
    const BlochVector r{rx, ry, rz};
    if (r.norm2() > 1.0 + 1e-12)
        throw std::invalid_argument("effective-walk: Bloch vector must satisfy |r| <= 1");
    json blocks = json::array();
    for (int p = -half_size; p < half_size; ++p) {
        const Matrix2 b = effective_walk_block(cfg, r, p);
        json entries = json::array();
        for (int i = 0; i < 2; ++i) {
            json row = json::array();
            for (int j = 0; j < 2; ++j)
                row.push_back(json::array({b(i, j).real(), b(i, j).imag()}));
            entries.push_back(row);
        }
        blocks.push_back(json{{"p", p},
                              {"k", cfg.coarse_angle(p)},
                              {"gamma", gamma_factor(r, cfg.coarse_angle(p))},
                              {"block", entries}});
    }
    json j{{"theta", theta},
           {"L", half_size},
           {"r_x", rx},
           {"r_y", ry},
           {"r_z", rz},
           {"blocks", blocks}};
    j["manifest"] = manifest(
        "effective-walk",
        json{{"theta", theta}, {"L", half_size}, {"r_x", rx}, {"r_y", ry}, {"r_z", rz}},
        seed, {out}, clock.ms());
    write_json_file(out, j);
    std::cout << "effective-walk: " << 2 * half_size << " momentum blocks -> " << out << "\n";
    return 0;
}

int run_wavepacket(const std::string& config_path, std::optional<double> rx,
                   std::optional<double> ry, std::optional<double> rz) {
    ExperimentConfig config = parse_experiment_config(config_path);
    if (rx) config.rx = *rx;
    if (ry) config.ry = *ry;
    if (rz) config.rz = *rz;
    const ExperimentSummary summary = run_experiment(config);
    std::cout << "wavepacket: slope " << summary.fit.slope << " (R2 " << summary.fit.r2
              << ") over n in [" << summary.fit_lo << "," << summary.fit_hi << "], max E "
              << summary.max_e << " -> " << config.out_csv << ", " << config.out_json << "\n";
    return 0;
}

int run_selftest() {
    const auto results = effdyn::selftest::run_all(std::cout);
    return effdyn::selftest::all_passed(results) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effective coarse-grained dynamics toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker threads (reserved; current build is serial)")
        ->check(CLI::PositiveNumber);

    // fidelity
    auto* fid = app.add_subcommand("fidelity", "channel fidelity of serialized inputs");
    std::string fid_u, fid_rho, fid_target, fid_out = "fidelity.json";
    Eigen::Index fid_dir = 2, fid_duv = 2;
    std::uint64_t fid_seed = 0;
    fid->add_option("--unitary", fid_u, "joint unitary U (matrix file)")->required();
    fid->add_option("--rho", fid_rho, "UV density matrix (matrix file)")->required();
    fid->add_option("--target", fid_target, "target IR unitary (matrix file)")->required();
    fid->add_option("--d-ir", fid_dir, "IR dimension")->required();
    fid->add_option("--d-uv", fid_duv, "UV dimension")->required();
    fid->add_option("--seed", fid_seed, "seed recorded in the report");
    fid->add_option("--out", fid_out, "output JSON path");

    // meanfield
    auto* mf = app.add_subcommand("meanfield", "mu and fidelity sweep over theta");
    std::string mf_vir, mf_h, mf_rho, mf_out = "meanfield.json";
    Eigen::Index mf_dir = 2, mf_duv = 2;
    std::vector<double> mf_thetas{0.04, 0.02, 0.01, 0.005};
    std::uint64_t mf_seed = 0;
    mf->add_option("--v-ir", mf_vir, "IR unitary V_IR (matrix file)")->required();
    mf->add_option("--h-mix", mf_h, "Hermitian mixing generator (matrix file)")->required();
    mf->add_option("--rho", mf_rho, "UV density matrix (matrix file)")->required();
    mf->add_option("--d-ir", mf_dir, "IR dimension")->required();
    mf->add_option("--d-uv", mf_duv, "UV dimension")->required();
    mf->add_option("--theta", mf_thetas, "theta values to sweep");
    mf->add_option("--seed", mf_seed, "seed recorded in the report");
    mf->add_option("--out", mf_out, "output JSON path");

    // optimize
    auto* opt = app.add_subcommand("optimize", "fidelity oracle vs mean-field candidate");
    std::string opt_vir, opt_h, opt_rho, opt_out = "optimize.json";
    Eigen::Index opt_dir = 2, opt_duv = 2;
    double opt_theta = 0.01;
    OptimizerConfig opt_cfg;
    opt->add_option("--v-ir", opt_vir, "IR unitary V_IR (matrix file)")->required();
    opt->add_option("--h-mix", opt_h, "Hermitian mixing generator (matrix file)")->required();
    opt->add_option("--rho", opt_rho, "UV density matrix (matrix file)")->required();
    opt->add_option("--d-ir", opt_dir, "IR dimension")->required();
    opt->add_option("--d-uv", opt_duv, "UV dimension")->required();
    opt->add_option("--theta", opt_theta, "coupling strength");
    opt->add_option("--restarts", opt_cfg.restarts, "optimizer restarts")
        ->check(CLI::PositiveNumber);
    opt->add_option("--max-iters", opt_cfg.max_iters, "iterations per restart");
    opt->add_option("--initial-step", opt_cfg.initial_step, "initial line-search step");
    opt->add_option("--seed", opt_cfg.seed, "restart seed");
    opt->add_option("--out", opt_out, "output JSON path");

    // mu-dirac
    auto* mud = app.add_subcommand("mu-dirac", "dissipation error of the walk");
    double mud_rx = 1.0, mud_ry = 0.0, mud_rz = 0.0;
    int mud_l = 8;
    std::uint64_t mud_seed = 0;
    std::string mud_out = "mu_dirac.json";
    mud->add_option("--rx", mud_rx, "Bloch r_x");
    mud->add_option("--ry", mud_ry, "Bloch r_y");
    mud->add_option("--rz", mud_rz, "Bloch r_z");
    mud->add_option("--L", mud_l, "coarse half-size L (generic path)")
        ->check(CLI::Range(2, 64));
    mud->add_option("--seed", mud_seed, "seed recorded in the report");
    mud->add_option("--out", mud_out, "output JSON path");

    // dispersion
    auto* disp = app.add_subcommand("dispersion", "exact/effective dispersion (CSV)");
    double disp_theta = 0.2;
    int disp_samples = 64;
    std::optional<double> disp_rx, disp_ry, disp_rz;
    std::uint64_t disp_seed = 0;
    std::string disp_out = "dispersion.csv";
    disp->add_option("--theta", disp_theta, "mass angle");
    disp->add_option("--samples", disp_samples, "number of momentum samples");
    disp->add_option("--rx", disp_rx, "Bloch r_x (enables omega_ir)");
    disp->add_option("--ry", disp_ry, "Bloch r_y");
    disp->add_option("--rz", disp_rz, "Bloch r_z");
    disp->add_option("--seed", disp_seed, "seed recorded in the manifest");
    disp->add_option("--out", disp_out, "output CSV path");

    // effective-walk
    auto* ew = app.add_subcommand("effective-walk", "effective walk momentum blocks");
    double ew_theta = 0.2, ew_rx = 1.0, ew_ry = 0.0, ew_rz = 0.0;
    int ew_l = 8;
    std::uint64_t ew_seed = 0;
    std::string ew_out = "effective_walk.json";
    ew->add_option("--theta", ew_theta, "mass angle");
    ew->add_option("--L", ew_l, "coarse half-size L")->check(CLI::Range(2, 4096));
    ew->add_option("--rx", ew_rx, "Bloch r_x");
    ew->add_option("--ry", ew_ry, "Bloch r_y");
    ew->add_option("--rz", ew_rz, "Bloch r_z");
    ew->add_option("--seed", ew_seed, "seed recorded in the manifest");
    ew->add_option("--out", ew_out, "output JSON path");

    // wavepacket
    auto* wp = app.add_subcommand("wavepacket", "trace-distance experiment");
    std::string wp_config;
    std::optional<double> wp_rx, wp_ry, wp_rz;
    wp->add_option("--config", wp_config, "experiment config file")->required();
    wp->add_option("--rx", wp_rx, "override Bloch r_x");
    wp->add_option("--ry", wp_ry, "override Bloch r_y");
    wp->add_option("--rz", wp_rz, "override Bloch r_z");

    // selftest
    app.add_subcommand("selftest", "run the full acceptance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fid->parsed())
            return run_fidelity(fid_u, fid_rho, fid_target, fid_dir, fid_duv, fid_seed,
                                fid_out);
        if (mf->parsed())
            return run_meanfield(mf_vir, mf_h, mf_rho, mf_dir, mf_duv, mf_thetas, mf_seed,
                                 mf_out);
        if (opt->parsed())
            return run_optimize(opt_vir, opt_h, opt_rho, opt_dir, opt_duv, opt_theta, opt_cfg,
                                opt_out);
        if (mud->parsed()) return run_mu_dirac(mud_rx, mud_ry, mud_rz, mud_l, mud_seed, mud_out);
        if (disp->parsed()) {
            std::optional<BlochVector> r;
            if (disp_rx || disp_ry || disp_rz)
                r = BlochVector{disp_rx.value_or(0.0), disp_ry.value_or(0.0),
                                disp_rz.value_or(0.0)};
            return run_dispersion(disp_theta, disp_samples, r, disp_seed, disp_out);
        }
        if (ew->parsed())
            return run_effective_walk(ew_theta, ew_l, ew_rx, ew_ry, ew_rz, ew_seed, ew_out);
        if (wp->parsed()) return run_wavepacket(wp_config, wp_rx, wp_ry, wp_rz);
        return run_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
