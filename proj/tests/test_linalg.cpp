#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "effdyn/linalg.hpp"
#include "effdyn/random.hpp"

using namespace effdyn;

namespace {
Matrix pauli_x() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1;
    m(1, 0) = 1;
    return m;
}
Matrix pauli_z() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1;
    m(1, 1) = -1;
    return m;
}
}  // namespace

TEST_CASE("kron uses IR-major ordering") {
    Matrix a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 5, 6, 7, 8;
    const Matrix k = kron(a, b);
    REQUIRE(k.rows() == 4);
    // (i*2+r, j*2+s) = a(i,j)*b(r,s)
    CHECK(std::abs(k(0, 0) - complexd(5)) < 1e-15);
    CHECK(std::abs(k(0, 2) - complexd(2 * 5)) < 1e-15);
    CHECK(std::abs(k(3, 1) - complexd(3 * 8)) < 1e-15);
    CHECK(std::abs(k(2, 3) - complexd(4 * 6)) < 1e-15);
}

TEST_CASE("partial trace of a product operator") {
    Rng rng(7);
    const Matrix a = random_hermitian(3, rng);
    const Matrix b = random_hermitian(2, rng);
    const Matrix full = kron(a, b);
    const Matrix over_uv = partial_trace(full, 3, 2, Side::UV);
    const Matrix over_ir = partial_trace(full, 3, 2, Side::IR);
    CHECK((over_uv - b.trace() * a).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((over_ir - a.trace() * b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace is linear") {
    Rng rng(11);
    const Matrix a = random_hermitian(6, rng);
    const Matrix b = random_hermitian(6, rng);
    const complexd alpha(0.3, -1.2), beta(-0.7, 0.4);
    const Matrix lhs = partial_trace(alpha * a + beta * b, 2, 3, Side::UV);
    const Matrix rhs = alpha * partial_trace(a, 2, 3, Side::UV) +
                       beta * partial_trace(b, 2, 3, Side::UV);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermitian basis: normalization, identity element, completeness") {
    for (Eigen::Index d : {2, 3, 4}) {
        const HermitianBasis basis = hermitian_basis(d);
        REQUIRE(basis.size() == d * d);
        CHECK((basis.elements[0] - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-14);
        for (Eigen::Index a = 0; a < basis.size(); ++a) {
            CHECK(hermiticity_residual(basis.elements[a]) < 1e-14);
            if (a > 0) CHECK(std::abs(basis.elements[a].trace()) < 1e-12);
            for (Eigen::Index b = 0; b < basis.size(); ++b) {
                const complexd overlap = (basis.elements[a] * basis.elements[b]).trace();
                const double expected = (a == b) ? static_cast<double>(d) : 0.0;
                CHECK(std::abs(overlap - expected) < 1e-12);
            }
        }
        // Reconstruction of a random Hermitian matrix from its coefficients.
        Rng rng(13 + static_cast<std::uint64_t>(d));
        const Matrix h = random_hermitian(d, rng);
        Matrix rebuilt = Matrix::Zero(d, d);
        for (const Matrix& b : basis.elements)
            rebuilt += ((h * b).trace() / static_cast<double>(d)) * b;
        CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("exp_i_hermitian closed form and group property") {
    const Matrix u = exp_i_hermitian(pauli_z(), 0.3);
    CHECK(std::abs(u(0, 0) - std::exp(complexd(0, 0.3))) < 1e-14);
    CHECK(std::abs(u(1, 1) - std::exp(complexd(0, -0.3))) < 1e-14);
    CHECK(std::abs(u(0, 1)) < 1e-14);

    Rng rng(17);
    const Matrix h = random_hermitian(4, rng);
    const Matrix lhs = exp_i_hermitian(h, 0.7);
    const Matrix rhs = exp_i_hermitian(h, 0.3) * exp_i_hermitian(h, 0.4);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(unitarity_residual(lhs) < 1e-12);
    CHECK_THROWS(exp_i_hermitian(Matrix(pauli_x() + complexd(0, 1) * Matrix::Identity(2, 2)), 1.0));
}

TEST_CASE("trace distance: known values, triangle, unitary invariance") {
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    CHECK(trace_distance(p0, p1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(trace_distance(p0, Matrix(0.5 * Matrix::Identity(2, 2))) ==
          doctest::Approx(0.5).epsilon(1e-12));

    Rng rng(19);
    auto random_rho = [&](Eigen::Index d) {
        Matrix g(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
        Matrix r = g * g.adjoint();
        return Matrix(r / r.trace());
    };
    const Matrix a = random_rho(4), b = random_rho(4), c = random_rho(4);
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12);
    const Matrix u = haar_unitary(4, rng);
    CHECK(std::abs(trace_distance(Matrix(u * a * u.adjoint()), Matrix(u * b * u.adjoint())) -
                   trace_distance(a, b)) < 1e-10);
}
