#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "effdyn/random.hpp"

using namespace effdyn;

TEST_CASE("haar_unitary is unitary and deterministic per seed") {
    for (Eigen::Index d : {2, 5, 16}) {
        const Matrix u = haar_unitary(d, 42);
        CHECK(unitarity_residual(u) < 1e-10);
        const Matrix v = haar_unitary(d, 42);
        CHECK((u - v).cwiseAbs().maxCoeff() == 0.0);
        const Matrix w = haar_unitary(d, 43);
        CHECK((u - w).cwiseAbs().maxCoeff() > 1e-3);
    }
}

TEST_CASE("haar_state normalized") {
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        const Vector psi = haar_state(6, rng);
        CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("random_hermitian is Hermitian") {
    Rng rng(6);
    CHECK(hermiticity_residual(random_hermitian(7, rng)) < 1e-14);
}

TEST_CASE("Haar first moment: mean of <psi|A|psi> approximates Tr[A]/d") {
    const Eigen::Index d = 4;
    Rng rng(77);
    const Matrix a = random_hermitian(d, rng);
    const int n = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vector psi = haar_state(d, rng);
        const double v = (psi.adjoint() * a * psi)(0, 0).real();
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    const double expected = a.trace().real() / static_cast<double>(d);
    CHECK(std::abs(mean - expected) <= 4.0 * se);
}
