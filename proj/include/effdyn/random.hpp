// random.hpp — Seeded deterministic sampling: Haar-random unitaries and
// pure states. The generator is the (fully specified) mt19937_64; every
// sampler takes it by reference so seeds stay explicit and runs are
// reproducible bit-for-bit on a given build.

#pragma once

#include "effdyn/types.hpp"

#include <cstdint>
#include <random>

namespace effdyn {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double gaussian() { return normal_(engine_); }

    complexd complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return complexd(re, im);
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Haar-random unitary: QR of a complex Gaussian matrix with the R
/// diagonal phases fixed.
Matrix haar_unitary(Eigen::Index d, Rng& rng);
inline Matrix haar_unitary(Eigen::Index d, std::uint64_t seed) {
    Rng rng(seed);
    return haar_unitary(d, rng);
}

/// Haar-random pure state (column vector, unit norm).
Vector haar_state(Eigen::Index d, Rng& rng);
inline Vector haar_state(Eigen::Index d, std::uint64_t seed) {
    Rng rng(seed);
    return haar_state(d, rng);
}

/// Random Hermitian matrix with Gaussian entries (GUE-like, not normalized).
Matrix random_hermitian(Eigen::Index d, Rng& rng);

}  // namespace effdyn
