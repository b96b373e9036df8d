#include "effdyn/channel.hpp"

#include <cmath>

namespace effdyn {

namespace {

void check_inputs(const BipartiteOperator& u, const DensityMatrix& rho_uv) {
    if (rho_uv.dim() != u.d_uv)
        throw std::invalid_argument("channel: rho_uv dimension does not match d_uv");
    if (unitarity_residual(u.matrix) > 1e-10)
        throw std::invalid_argument("channel: u is not unitary");
}

}  // namespace

Matrix apply_induced_channel(const BipartiteOperator& u, const DensityMatrix& rho_uv,
                             const Matrix& input) {
    if (input.rows() != u.d_ir || input.cols() != u.d_ir)
        throw std::invalid_argument("apply_induced_channel: input dimension mismatch");
    const Matrix joint = u.matrix * kron(input, rho_uv.matrix) * u.matrix.adjoint();
    return partial_trace(joint, u.d_ir, u.d_uv, Side::UV);
}

ChoiOperator induced_channel_choi(const BipartiteOperator& u, const DensityMatrix& rho_uv) {
    check_inputs(u, rho_uv);
    const Eigen::Index d = u.d_ir;
    ChoiOperator choi;
    choi.d_ir = d;
    choi.source = "traced-unitary channel";
    choi.matrix = Matrix::Zero(d * d, d * d);
    // Act on one half of the unnormalized maximally entangled operator:
    // D = Σ_ij C(|i⟩⟨j|) ⊗ |i⟩⟨j|.
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            Matrix unit = Matrix::Zero(d, d);
            unit(i, j) = 1.0;
            const Matrix out = apply_induced_channel(u, rho_uv, unit);
            for (Eigen::Index a = 0; a < d; ++a)
                for (Eigen::Index b = 0; b < d; ++b)
                    choi.matrix(a * d + i, b * d + j) = out(a, b);
        }
    }
    return choi;
}

Matrix o_uv(const BipartiteOperator& u, const Matrix& u_ir) {
    if (u_ir.rows() != u.d_ir || u_ir.cols() != u.d_ir)
        throw std::invalid_argument("o_uv: u_ir dimension does not match d_ir");
    const Matrix m = kron(u_ir.adjoint(), Matrix::Identity(u.d_uv, u.d_uv)) * u.matrix;
    return partial_trace(m, u.d_ir, u.d_uv, Side::IR);
}

FidelityReport channel_fidelity_unitary_target(const BipartiteOperator& u,
                                               const DensityMatrix& rho_uv,
                                               const Matrix& u_ir) {
    check_inputs(u, rho_uv);
    if (unitarity_residual(u_ir) > 1e-10)
        throw std::invalid_argument("channel_fidelity_unitary_target: u_ir is not unitary");
    FidelityReport report;
    report.d_ir = u.d_ir;
    report.d_uv = u.d_uv;
    report.o_uv = o_uv(u, u_ir);
    const double d2 = static_cast<double>(u.d_ir * u.d_ir);
    report.fidelity =
        (report.o_uv * rho_uv.matrix * report.o_uv.adjoint()).trace().real() / d2;
    report.o_uv_unitarity_residual =
        unitarity_residual(report.o_uv / static_cast<double>(u.d_ir));
    report.is_unit_fidelity = report.fidelity >= 1.0 - 1e-9;
    return report;
}

HaarCheckReport haar_average_identity_check(const BipartiteOperator& u,
                                            const DensityMatrix& rho_uv, const Matrix& u_ir,
                                            int n_samples, std::uint64_t seed) {
    if (n_samples < 100)
        throw std::invalid_argument("haar_average_identity_check: n_samples must be >= 100");
    check_inputs(u, rho_uv);
    const double d = static_cast<double>(u.d_ir);
    Rng rng(seed);
    double sum = 0.0;
    double sum2 = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        const Vector psi = haar_state(u.d_ir, rng);
        const Matrix evolved = apply_induced_channel(u, rho_uv, psi * psi.adjoint());
        const Vector target = u_ir * psi;
        const double val = (target.adjoint() * evolved * target).value().real();
        sum += val;
        sum2 += val * val;
    }
    const double n = static_cast<double>(n_samples);
    const double mean = sum / n;
    const double var = (sum2 / n - mean * mean) * n / (n - 1.0);
    HaarCheckReport report;
    report.n_samples = n_samples;
    report.seed = seed;
    report.mc_estimate = (d + 1.0) * mean - 1.0;
    report.std_error = (d + 1.0) * std::sqrt(std::max(0.0, var) / n);
    report.closed_form = d * channel_fidelity_unitary_target(u, rho_uv, u_ir).fidelity;
    return report;
}

FactorizationDiagnostic factorization_diagnostic(const BipartiteOperator& u,
                                                 const DensityMatrix& rho_uv,
                                                 const Matrix& u_ir) {
    const FidelityReport fr = channel_fidelity_unitary_target(u, rho_uv, u_ir);
    FactorizationDiagnostic diag;
    diag.fidelity = fr.fidelity;
    diag.o_uv_unitarity_residual = fr.o_uv_unitarity_residual;
    diag.unit_fidelity = fr.is_unit_fidelity;
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_uv.matrix, Eigen::EigenvaluesOnly);
    diag.rho_full_rank = es.eigenvalues().minCoeff() > 1e-12;
    return diag;
}

}  // namespace effdyn
