// wavepacket.hpp — Gaussian packets on the walk's band eigenbasis, exact
// two-step evolution in momentum space, reduction to the IR factor,
// effective evolution, and the trace-distance error series.

#pragma once

#include "effdyn/diracqw.hpp"
#include "effdyn/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace effdyn {

enum class Band { Plus, Minus };

struct GaussianPacketSpec {
    double sigma_k = 0.02;  // momentum width, radians
    double k0 = 0.2;        // center momentum, radians
    int x0 = 0;             // center site (interpreted mod 4L)
    Band band = Band::Plus;
};

/// Pure state of the walker: amplitudes indexed by (coin c, site x),
/// layout index c*4L + x.
struct RingState {
    int half_size = 0;
    Vector amplitudes;

    int fine_sites() const { return 4 * half_size; }
    complexd& at(int c, int x) { return amplitudes(c * fine_sites() + x); }
    complexd at(int c, int x) const { return amplitudes(c * fine_sites() + x); }
};

struct BandEigensystem {
    double omega = 0.0;
    Vector2 w_plus;   // eigenvalue e^{-iω}
    Vector2 w_minus;  // eigenvalue e^{+iω}
};

/// Normalized eigenvectors of walk_block(cfg, p). Degenerate θ = 0 cases
/// resolve to the coin basis deterministically.
BandEigensystem band_eigensystem(const RingWalkConfig& cfg, int p);

/// Σ_p ψ(k_p) w_band(k_p) ⊗ |p⟩ on the discrete momentum grid, normalized.
/// Rejects σ_k so small that fewer than 8 grid points fall within ±3σ_k.
RingState build_packet(const RingWalkConfig& cfg, const GaussianPacketSpec& spec);

/// Applies the momentum block of U² exactly n times.
RingState evolve_exact(const RingWalkConfig& cfg, const RingState& state, int double_steps);

/// Low-rank representation ρ = Σ_i w_i v_i v_i† on the IR space
/// (2L sites × 2 coin, index c*2L + x_ir).
struct LowRankDensity {
    Eigen::Index dim = 0;
    std::vector<Vector> factors;   // unit vectors
    std::vector<double> weights;   // nonnegative

    Matrix dense() const;
};

/// ρ_IR = Σ_parity |ψ_parity⟩⟨ψ_parity|; rank ≤ 2 by construction.
LowRankDensity reduce_to_ir(const RingState& state);

/// Each factor evolved by the effective walk blocks, n single steps.
LowRankDensity evolve_effective(const RingWalkConfig& cfg, const BlochVector& r,
                                const LowRankDensity& rho, int steps);

/// Reduced UV qubit state of a ring state, as a Bloch vector.
BlochVector packet_uv_bloch(const RingState& state);

/// E_n = ½ || Tr_UV[U^{2n} ρ U†^{2n}] − U_IR^n ρ_IR U_IR†^n ||₁ for
/// n = 0..n_max, computed through the rank-≤4 Gram projection so each
/// step costs O(L).
std::vector<std::pair<int, double>> trace_distance_series(const RingWalkConfig& cfg,
                                                          const GaussianPacketSpec& spec,
                                                          const BlochVector& r, int n_max);

struct ExperimentConfig {
    int half_size = 200;  // L; coarse chain 2L sites
    double theta = 0.2;
    double sigma_k = 0.02;
    double k0 = 0.2;
    int x0 = -200;
    Band band = Band::Plus;
    int n_max = 100;
    std::optional<double> rx, ry, rz;  // default: packet-derived Bloch vector
    std::uint64_t seed = 0;
    std::string out_csv = "wavepacket.csv";
    std::string out_json = "wavepacket.json";
};

ExperimentConfig parse_experiment_config(const std::string& path);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least-squares fit of E_n over n ∈ [n_lo, n_hi].
LinearFit fit_series(const std::vector<std::pair<int, double>>& series, int n_lo, int n_hi);

struct ExperimentSummary {
    ExperimentConfig config;
    BlochVector bloch_used;
    bool bloch_from_packet = false;
    LinearFit fit;
    int fit_lo = 0, fit_hi = 0;
    double max_e = 0.0;
    double runtime_ms = 0.0;
};

/// Runs the experiment and writes the CSV series and a JSON summary.
ExperimentSummary run_experiment(const ExperimentConfig& config);

}  // namespace effdyn
