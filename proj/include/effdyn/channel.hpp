// channel.hpp — Channels induced by tracing out the UV factor, their Choi
// operators, and the channel fidelity against unitary targets.

#pragma once

#include "effdyn/linalg.hpp"
#include "effdyn/random.hpp"
#include "effdyn/types.hpp"

#include <cstdint>
#include <string>

namespace effdyn {

/// Choi matrix of a channel on the IR space, Σ_ij C(|i⟩⟨j|) ⊗ |i⟩⟨j|
/// (unnormalized convention, trace = d_ir for trace-preserving channels).
struct ChoiOperator {
    Eigen::Index d_ir = 0;
    Matrix matrix;
    std::string source;
};

struct FidelityReport {
    double fidelity = 0.0;
    Matrix o_uv;
    bool is_unit_fidelity = false;  // at tolerance 1e-9
    double o_uv_unitarity_residual = 0.0;
    Eigen::Index d_ir = 0;
    Eigen::Index d_uv = 0;
};

/// Choi operator of ρ_ir ↦ Tr_UV[U (ρ_ir ⊗ ρ_uv) U†].
ChoiOperator induced_channel_choi(const BipartiteOperator& u, const DensityMatrix& rho_uv);

/// Action of the induced channel on an IR operator (not necessarily a state).
Matrix apply_induced_channel(const BipartiteOperator& u, const DensityMatrix& rho_uv,
                             const Matrix& input);

/// O_UV := Tr_IR[(U_IR† ⊗ 1_UV) U]. Satisfies 0 ≤ O†O/d_ir² ≤ 1.
Matrix o_uv(const BipartiteOperator& u, const Matrix& u_ir);

/// Channel fidelity against the unitary target U_IR,
/// F = Tr_UV[O_UV ρ_UV O_UV†] / d_ir².
FidelityReport channel_fidelity_unitary_target(const BipartiteOperator& u,
                                               const DensityMatrix& rho_uv,
                                               const Matrix& u_ir);

struct HaarCheckReport {
    double mc_estimate = 0.0;   // (d+1)·E[⟨ψ|U_IR† C(ψ) U_IR|ψ⟩] − 1
    double closed_form = 0.0;   // d_ir · F from the O_UV formula
    double std_error = 0.0;
    int n_samples = 0;
    std::uint64_t seed = 0;
};

/// Monte Carlo check of the identity relating channel fidelity to the
/// average state fidelity over Haar-random pure inputs.
HaarCheckReport haar_average_identity_check(const BipartiteOperator& u,
                                            const DensityMatrix& rho_uv, const Matrix& u_ir,
                                            int n_samples, std::uint64_t seed);

struct FactorizationDiagnostic {
    double fidelity = 0.0;
    double o_uv_unitarity_residual = 0.0;  // of O_UV / d_ir
    bool rho_full_rank = false;
    bool unit_fidelity = false;  // at tolerance 1e-9
};

/// Flags whether F = 1 and whether O_UV/d_ir is unitary. With a full-rank
/// ρ_UV, unit fidelity forces the residual down to ~1e-8; with a rank-
/// deficient ρ_UV it need not (controlled-unitary counterexample).
FactorizationDiagnostic factorization_diagnostic(const BipartiteOperator& u,
                                                 const DensityMatrix& rho_uv,
                                                 const Matrix& u_ir);

}  // namespace effdyn
