// meanfield.hpp — Weak-coupling machinery: extract the mixing generator
// from a θ-family, build the mean-field effective Hamiltonian, compute the
// dissipation error μ three independent ways, and predict the fidelity to
// second order in θ.

#pragma once

#include "effdyn/linalg.hpp"
#include "effdyn/types.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace effdyn {

/// U(θ) = (V_IR ⊗ V_UV) · U_MIX(θ), with U_MIX analytic at 0 and
/// U_MIX(0) = 1. u_mix returns the full bipartite matrix, IR-major.
struct WeakCouplingFamily {
    Eigen::Index d_ir = 0;
    Eigen::Index d_uv = 0;
    Matrix v_ir;
    Matrix v_uv;
    std::function<Matrix(double)> u_mix;

    Matrix full_unitary(double theta) const { return kron(v_ir, v_uv) * u_mix(theta); }
};

/// The first-order mixing generator H_MIX together with its decomposition
/// H_MIX = Σ_λ B_λ ⊗ h_λ onto the normalized Hermitian IR basis,
/// h_λ = Tr_IR[(B_λ ⊗ 1) H_MIX] / d_ir.
struct MixGenerator {
    Eigen::Index d_ir = 0;
    Eigen::Index d_uv = 0;
    Matrix h_mix;
    HermitianBasis ir_basis;
    std::vector<Matrix> uv_coefficients;
};

/// Decompose a given Hermitian bipartite generator.
MixGenerator make_mix_generator(const Matrix& h_mix, Eigen::Index d_ir, Eigen::Index d_uv);

/// H_MIX by symmetrized central difference −i(U_MIX(s) − U_MIX(−s))/(2s),
/// Hermitian-symmetrized, with a Richardson self-check at step/2.
MixGenerator extract_h_mix(const WeakCouplingFamily& family, double step);

/// H_IR = Tr_UV[(ρ_UV ⊗ 1_IR) H_MIX] — the mean-field average.
Matrix mean_field_h_ir(const MixGenerator& gen, const DensityMatrix& rho_uv);

/// U_IR = V_IR · exp(iθ H_IR).
Matrix effective_unitary(const WeakCouplingFamily& family, const DensityMatrix& rho_uv,
                         double theta);
Matrix effective_unitary(const Matrix& v_ir, const MixGenerator& gen,
                         const DensityMatrix& rho_uv, double theta);

enum class MuMethod { Direct, Correlator, Variance };

/// Dissipation error μ. The three methods are algebraically equivalent
/// routes: the four-term trace formula, the double-sum of connected
/// correlators, and the sum of UV-operator variances in the normalized
/// basis.
double mu(const MixGenerator& gen, const DensityMatrix& rho_uv, MuMethod method);

/// F = 1 − θ²(⟨δ²⟩_IR − ⟨δ⟩_IR² + μ) with δ = candidate − H_IR(mean-field).
/// Without a candidate, δ = 0 and the result is 1 − θ²μ.
double predicted_fidelity(const MixGenerator& gen, const DensityMatrix& rho_uv, double theta,
                          const std::optional<Matrix>& candidate_h_ir = std::nullopt);

}  // namespace effdyn
