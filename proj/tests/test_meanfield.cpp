#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "effdyn/channel.hpp"
#include "effdyn/linalg.hpp"
#include "effdyn/meanfield.hpp"
#include "effdyn/random.hpp"

using namespace effdyn;

namespace {

Matrix sigma(int axis) {
    Matrix m = Matrix::Zero(2, 2);
    const complexd i(0, 1);
    if (axis == 0) {
        m(0, 1) = 1;
        m(1, 0) = 1;
    } else if (axis == 1) {
        m(0, 1) = -i;
        m(1, 0) = i;
    } else {
        m(0, 0) = 1;
        m(1, 1) = -1;
    }
    return m;
}

DensityMatrix random_density(Eigen::Index d, Rng& rng) {
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return DensityMatrix(rho);
}

WeakCouplingFamily analytic_family(const Matrix& h, Eigen::Index d_ir, Eigen::Index d_uv,
                                   Rng& rng) {
    WeakCouplingFamily family;
    family.d_ir = d_ir;
    family.d_uv = d_uv;
    family.v_ir = haar_unitary(d_ir, rng);
    family.v_uv = haar_unitary(d_uv, rng);
    family.u_mix = [h](double t) { return exp_i_hermitian(h, t); };
    return family;
}

}  // namespace

TEST_CASE("make_mix_generator reconstructs H_MIX from the decomposition") {
    Rng rng(21);
    for (int t = 0; t < 5; ++t) {
        const Eigen::Index d_ir = 2 + (t % 2), d_uv = 2 + (t % 3);
        const Matrix h = random_hermitian(d_ir * d_uv, rng);
        const MixGenerator gen = make_mix_generator(h, d_ir, d_uv);
        Matrix rebuilt = Matrix::Zero(d_ir * d_uv, d_ir * d_uv);
        for (Eigen::Index l = 0; l < gen.ir_basis.size(); ++l)
            rebuilt += kron(gen.ir_basis.elements[l], gen.uv_coefficients[l]);
        CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("extract_h_mix recovers the generator of an analytic family") {
    Rng rng(22);
    const Matrix h = random_hermitian(6, rng);
    const WeakCouplingFamily family = analytic_family(h, 2, 3, rng);
    const double step = 1e-3;
    const MixGenerator gen = extract_h_mix(family, step);
    CHECK((gen.h_mix - h).cwiseAbs().maxCoeff() < 20.0 * step * step * h.norm());
    CHECK(hermiticity_residual(gen.h_mix) < 1e-12);

    // Identity family -> zero generator.
    WeakCouplingFamily trivial = family;
    trivial.u_mix = [](double) { return Matrix(Matrix::Identity(6, 6)); };
    CHECK(extract_h_mix(trivial, step).h_mix.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mean_field_h_ir on product generators") {
    Rng rng(23);
    const Matrix b_ir = random_hermitian(3, rng);
    const Matrix a_uv = random_hermitian(2, rng);
    const MixGenerator gen = make_mix_generator(kron(b_ir, a_uv), 3, 2);
    const DensityMatrix rho = random_density(2, rng);
    const double weight = (rho.matrix * a_uv).trace().real();
    const Matrix h_ir = mean_field_h_ir(gen, rho);
    CHECK((h_ir - weight * b_ir).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(hermiticity_residual(h_ir) < 1e-10);
}

TEST_CASE("mu hand-evaluated cases") {
    const MixGenerator gen = make_mix_generator(kron(sigma(0), sigma(2)), 2, 2);
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1;  // sigma_z eigenstate: zero variance
    CHECK(std::abs(mu(gen, DensityMatrix(p0), MuMethod::Variance)) < 1e-12);
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;  // |+><+|: unit variance of sigma_z
    CHECK(mu(gen, DensityMatrix(plus), MuMethod::Variance) == doctest::Approx(1.0).epsilon(1e-10));

    // H = 1_uv x B has no UV variance at all.
    Rng rng(24);
    const Matrix b = random_hermitian(2, rng);
    const MixGenerator product = make_mix_generator(kron(b, Matrix::Identity(2, 2)), 2, 2);
    CHECK(std::abs(mu(product, random_density(2, rng), MuMethod::Direct)) < 1e-10);
}

TEST_CASE("mu: three methods agree, nonnegative, identity-shift invariant") {
    Rng rng(25);
    for (int t = 0; t < 10; ++t) {
        const Eigen::Index d_ir = 2 + (t % 3), d_uv = 2 + ((t + 1) % 3);
        const Matrix h = random_hermitian(d_ir * d_uv, rng);
        const MixGenerator gen = make_mix_generator(h, d_ir, d_uv);
        const DensityMatrix rho = random_density(d_uv, rng);
        const double m1 = mu(gen, rho, MuMethod::Direct);
        const double m2 = mu(gen, rho, MuMethod::Correlator);
        const double m3 = mu(gen, rho, MuMethod::Variance);
        CHECK(std::abs(m1 - m2) < 1e-9);
        CHECK(std::abs(m2 - m3) < 1e-9);
        CHECK(m1 > -1e-10);

        const Matrix shifted = h + 2.7 * Matrix::Identity(d_ir * d_uv, d_ir * d_uv);
        const MixGenerator gen2 = make_mix_generator(shifted, d_ir, d_uv);
        CHECK(std::abs(mu(gen2, rho, MuMethod::Direct) - m1) < 1e-9);
    }
}

TEST_CASE("predicted_fidelity: candidate handling") {
    Rng rng(26);
    const Matrix h = random_hermitian(4, rng);
    const MixGenerator gen = make_mix_generator(h, 2, 2);
    const DensityMatrix rho = random_density(2, rng);
    const double theta = 0.05;
    const double base = predicted_fidelity(gen, rho, theta);
    CHECK(base == doctest::Approx(1.0 - theta * theta * mu(gen, rho, MuMethod::Direct))
                      .epsilon(1e-12));

    const Matrix h_ir = mean_field_h_ir(gen, rho);
    // Identity shifts are invisible (connected variance of the identity is zero).
    CHECK(std::abs(predicted_fidelity(gen, rho, theta, h_ir + Matrix::Identity(2, 2)) - base) <
          1e-12);
    // sigma_x perturbation adds exactly theta^2 (unit connected variance).
    const double perturbed = predicted_fidelity(gen, rho, theta, Matrix(h_ir + sigma(0)));
    CHECK(perturbed == doctest::Approx(base - theta * theta).epsilon(1e-10));
    // Maximality: any perturbation can only lower the prediction.
    for (int axis = 0; axis < 3; ++axis)
        for (double eps : {0.1, -0.1}) {
            const Matrix cand = h_ir + eps * sigma(axis);
            CHECK(predicted_fidelity(gen, rho, theta, cand) <= base + 1e-12);
        }
}

TEST_CASE("effective_unitary basics and exact fidelity for uncoupled families") {
    Rng rng(27);
    const Matrix b = random_hermitian(3, rng);
    Matrix h = kron(b, Matrix::Identity(2, 2));
    WeakCouplingFamily family = analytic_family(h, 3, 2, rng);
    const DensityMatrix rho = random_density(2, rng);
    // theta = 0 -> V_IR.
    CHECK((effective_unitary(family, rho, 0.0) - family.v_ir).cwiseAbs().maxCoeff() < 1e-10);
    // Uncoupled family: the mean-field candidate is exact at any theta.
    const double theta = 0.3;
    const Matrix cand = effective_unitary(family, rho, theta);
    CHECK(unitarity_residual(cand) < 1e-10);
    const BipartiteOperator u(3, 2, family.full_unitary(theta));
    CHECK(channel_fidelity_unitary_target(u, rho, cand).fidelity ==
          doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("expansion order by theta-halving") {
    Rng rng(28);
    Matrix h = random_hermitian(4, rng);
    h /= h.norm();
    const WeakCouplingFamily family = analytic_family(h, 2, 2, rng);
    const DensityMatrix rho = random_density(2, rng);
    const MixGenerator gen = extract_h_mix(family, 1e-3);
    auto residual = [&](double theta) {
        const Matrix cand = effective_unitary(family.v_ir, gen, rho, theta);
        const BipartiteOperator u(2, 2, family.full_unitary(theta));
        const double exact = channel_fidelity_unitary_target(u, rho, cand).fidelity;
        return std::abs(exact - predicted_fidelity(gen, rho, theta));
    };
    const double r1 = residual(0.04);
    const double r2 = residual(0.02);
    CHECK(r1 / std::max(r2, 1e-16) >= 7.0);
}
