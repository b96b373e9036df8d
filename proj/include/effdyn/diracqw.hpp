// diracqw.hpp — Dirac quantum walk on a ring of 4L sites, its binning
// coarse-graining, the two-step factorization, the closed-form mixing
// generator, the effective walk and both dispersion relations.
//
// Conventions (fixed throughout):
//   - fine chain: sites x = 0..4L-1, coin c ∈ {0,1}; full layout index
//     c*4L + x, which is IR-major with i_ir = c*2L + x_ir, i_uv = x mod 2.
//   - fine momenta: integer p ∈ [-2L, 2L-1], angle k = πp/(2L),
//     |p⟩ = (4L)^{-1/2} Σ_x e^{-ikx} |x⟩.
//   - coarse momenta: integer p ∈ [-L, L-1], angle k = πp/L.

#pragma once

#include "effdyn/meanfield.hpp"
#include "effdyn/types.hpp"

#include <optional>
#include <utility>

namespace effdyn {

struct RingWalkConfig {
    double theta = 0.0;  // mass angle, radians, in [0, π/4]
    int half_size = 2;   // L; fine chain has 4L sites, coarse chain 2L

    RingWalkConfig() = default;
    RingWalkConfig(double theta_, int half_size_) : theta(theta_), half_size(half_size_) {
        validate();
    }
    void validate() const;

    int fine_sites() const { return 4 * half_size; }
    int coarse_sites() const { return 2 * half_size; }
    double fine_angle(int p) const;    // k = πp/(2L), p in [-2L, 2L-1]
    double coarse_angle(int p) const;  // k = πp/L,  p in [-L, L-1]
};

/// Momentum-space walk block, [[e^{ik}cosθ, -i sinθ], [-i sinθ, e^{-ik}cosθ]].
Matrix2 walk_block(const RingWalkConfig& cfg, int p);

/// x ↦ (⌊x/2⌋, x mod 2).
std::pair<int, int> coarse_grain_index(int x, int half_size);

/// Fold a fine momentum index onto the coarse Brillouin zone [-L, L-1].
int fold_to_coarse(int p, int half_size);

/// The other fine momentum aliased onto the same coarse index.
int alias_partner(int p_coarse, int half_size);

/// One-step walk unitary in position space (8L × 8L, layout above).
/// Intended for tests at small L; momentum blocks are used elsewhere.
BipartiteOperator walk_unitary(const RingWalkConfig& cfg);

/// U² = (V_IR ⊗ 1_UV) U_MIX(θ) with V_IR = diag(T_IR†, T_IR) in coin
/// blocks. The returned family's u_mix(t) uses the closed-form blocks
/// A(t) = cos²t − sin²t T², B(t) = sin t cos t (T + T†) T².
WeakCouplingFamily u_squared_factorization(const RingWalkConfig& cfg);

/// Closed-form mixing generator assembled from coarse momentum blocks.
MixGenerator h_mix_dirac(const RingWalkConfig& cfg);

/// γ(k) = r_x (1 + cos k) − r_y sin k (k in radians).
double gamma_factor(const BlochVector& r, double k);

/// Per-momentum mean-field effective Hamiltonian kernel,
/// −γ(k) [[0, e^{-ik}], [e^{ik}, 0]].
Matrix2 h_ir_kernel(const BlochVector& r, double k);

/// Effective walk block at coarse momentum p:
/// [[e^{ik}cos(γθ), -i sin(γθ)], [-i sin(γθ), e^{-ik}cos(γθ)]], k = πp/L.
Matrix2 effective_walk_block(const RingWalkConfig& cfg, const BlochVector& r, int p);

struct DispersionResult {
    double omega = 0.0;
    std::optional<double> omega_ir;
};

/// ω = arccos(cos k cos θ), and ω_IR = arccos(cos k cos(γ(k)θ)) when a
/// Bloch vector is given.
DispersionResult dispersion(const RingWalkConfig& cfg, const std::optional<BlochVector>& r,
                            double k);

/// μ = ½(4 − 3r_x² − r_y²).
double mu_dirac_closed(const BlochVector& r);

/// μ assembled from the box mixing generator at the given L (d_ir = 4L).
double mu_dirac_generic(const BlochVector& r, int half_size);

/// The two analytic box sums: (2/L) Σ cos²(πp/2L) and (1/2L) Σ r_xy(p)².
double box_cos2_sum(int half_size);
double box_rxy2_sum(const BlochVector& r, int half_size);

}  // namespace effdyn
