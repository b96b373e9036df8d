#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "effdyn/channel.hpp"
#include "effdyn/linalg.hpp"
#include "effdyn/random.hpp"

using namespace effdyn;

namespace {

DensityMatrix ket0_density() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1;
    return DensityMatrix(m);
}

DensityMatrix mixed(Eigen::Index d) {
    return DensityMatrix(Matrix(Matrix::Identity(d, d) / static_cast<double>(d)));
}

DensityMatrix random_density(Eigen::Index d, Rng& rng) {
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return DensityMatrix(rho);
}

BipartiteOperator controlled_unitary(const Matrix& u0, const Matrix& u1) {
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    return BipartiteOperator(2, 2, kron(u0, p0) + kron(u1, p1));
}

}  // namespace

TEST_CASE("factorized U: o_uv, fidelity, Choi") {
    Rng rng(1);
    const Matrix v_ir = haar_unitary(3, rng);
    const Matrix v_uv = haar_unitary(2, rng);
    const BipartiteOperator u(3, 2, kron(v_ir, v_uv));
    const DensityMatrix rho = random_density(2, rng);

    const Matrix o = o_uv(u, v_ir);
    CHECK((o - 3.0 * v_uv).cwiseAbs().maxCoeff() < 1e-12);

    const FidelityReport rep = channel_fidelity_unitary_target(u, rho, v_ir);
    CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.is_unit_fidelity);

    // Choi of the unitary channel V_IR is the rank-1 |V>><<V|.
    // Choi convention: D = sum_ij C(|i><j|) x |i><j|.
    const ChoiOperator choi = induced_channel_choi(u, rho);
    Matrix expected = Matrix::Zero(9, 9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Matrix eij = Matrix::Zero(3, 3);
            eij(i, j) = 1;
            Matrix block = v_ir * eij * v_ir.adjoint();
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    expected(a * 3 + i, b * 3 + j) += block(a, b);
        }
    CHECK((choi.matrix - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Choi operator is PSD and trace-preserving on random instances") {
    Rng rng(2);
    for (int t = 0; t < 10; ++t) {
        const BipartiteOperator u(2, 3, haar_unitary(6, rng));
        const DensityMatrix rho = random_density(3, rng);
        const ChoiOperator choi = induced_channel_choi(u, rho);
        CHECK(hermiticity_residual(choi.matrix) < 1e-10);
        Eigen::SelfAdjointEigenSolver<Matrix> es(choi.matrix, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
        // Trace preservation: Tr over the output (first) factor gives identity.
        const Matrix tp = partial_trace(choi.matrix, 2, 2, Side::IR);
        CHECK((tp - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
        // Consistency with direct channel action on a state.
        const DensityMatrix in = random_density(2, rng);
        const Matrix direct = apply_induced_channel(u, rho, in.matrix);
        CHECK(std::abs(direct.trace() - complexd(1.0)) < 1e-10);
    }
}

TEST_CASE("SWAP with rho_uv=|0><0| induces replace-with-|0><0|") {
    Matrix swap = Matrix::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = 1;
    swap(1, 2) = swap(2, 1) = 1;
    const BipartiteOperator u(2, 2, swap);
    Rng rng(3);
    const DensityMatrix in = random_density(2, rng);
    const Matrix out = apply_induced_channel(u, ket0_density(), in.matrix);
    CHECK((out - ket0_density().matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("controlled unitary: o_uv value and fidelity regimes") {
    Rng rng(4);
    const Matrix u0 = haar_unitary(2, rng);
    const Matrix u1 = haar_unitary(2, rng);
    const BipartiteOperator u = controlled_unitary(u0, u1);

    const Matrix o = o_uv(u, u0);
    CHECK(std::abs(o(0, 0) - complexd(2.0)) < 1e-12);
    CHECK(std::abs(o(1, 1) - (u0.adjoint() * u1).trace()) < 1e-12);
    CHECK(std::abs(o(0, 1)) < 1e-12);
    CHECK(std::abs(o(1, 0)) < 1e-12);

    CHECK(channel_fidelity_unitary_target(u, ket0_density(), u0).fidelity ==
          doctest::Approx(1.0).epsilon(1e-12));
    const double f_mixed = channel_fidelity_unitary_target(u, mixed(2), u0).fidelity;
    CHECK(f_mixed < 1.0 - 1e-3);

    const auto diag1 = factorization_diagnostic(u, ket0_density(), u0);
    CHECK(diag1.unit_fidelity);
    CHECK(!diag1.rho_full_rank);
    CHECK(diag1.o_uv_unitarity_residual > 0.1);  // non-factorized counterexample

    const auto diag2 = factorization_diagnostic(u, mixed(2), u0);
    CHECK(diag2.rho_full_rank);
    CHECK(!diag2.unit_fidelity);
}

TEST_CASE("left-unitary invariance of the fidelity") {
    Rng rng(5);
    const BipartiteOperator u(2, 2, haar_unitary(4, rng));
    const DensityMatrix rho = random_density(2, rng);
    const Matrix u_ir = haar_unitary(2, rng);
    const Matrix w = haar_unitary(2, rng);
    const double f1 = channel_fidelity_unitary_target(u, rho, u_ir).fidelity;
    const BipartiteOperator u2(2, 2, kron(w, Matrix::Identity(2, 2)) * u.matrix);
    const double f2 = channel_fidelity_unitary_target(u2, rho, Matrix(w * u_ir)).fidelity;
    CHECK(std::abs(f1 - f2) < 1e-12);
}

TEST_CASE("fidelity bounded in [0,1] and O_UV operator inequality") {
    Rng rng(6);
    for (int t = 0; t < 10; ++t) {
        const BipartiteOperator u(3, 2, haar_unitary(6, rng));
        const DensityMatrix rho = random_density(2, rng);
        const Matrix u_ir = haar_unitary(3, rng);
        const FidelityReport rep = channel_fidelity_unitary_target(u, rho, u_ir);
        CHECK(rep.fidelity >= 0.0);
        CHECK(rep.fidelity <= 1.0 + 1e-10);
        const Matrix x = rep.o_uv.adjoint() * rep.o_uv / 9.0;
        Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
        CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-10);
    }
}

TEST_CASE("haar_average_identity_check agrees with the closed form") {
    Rng rng(7);
    // Factorized case: every sample contributes exactly 1, mc = d_ir.
    const Matrix v_ir = haar_unitary(2, rng);
    const Matrix v_uv = haar_unitary(2, rng);
    const BipartiteOperator fac(2, 2, kron(v_ir, v_uv));
    const auto rep1 = haar_average_identity_check(fac, mixed(2), v_ir, 200, 11);
    CHECK(std::abs(rep1.mc_estimate - 2.0) < 1e-9);

    const BipartiteOperator u(2, 2, haar_unitary(4, rng));
    const DensityMatrix rho = random_density(2, rng);
    const Matrix u_ir = haar_unitary(2, rng);
    const auto rep2 = haar_average_identity_check(u, rho, u_ir, 2000, 12);
    CHECK(std::abs(rep2.mc_estimate - rep2.closed_form) <= 3.0 * rep2.std_error);
    CHECK_THROWS(haar_average_identity_check(u, rho, u_ir, 50, 12));
}
