#include "effdyn/random.hpp"

#include <cmath>

namespace effdyn {

Matrix haar_unitary(Eigen::Index d, Rng& rng) {
    if (d < 1) throw std::invalid_argument("haar_unitary: d must be >= 1");
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity of QR so the distribution is Haar.
    for (Eigen::Index j = 0; j < d; ++j) {
        const complexd rjj = r(j, j);
        const double mag = std::abs(rjj);
        q.col(j) *= (mag > 0.0) ? rjj / mag : complexd(1.0, 0.0);
    }
    return q;
}

Vector haar_state(Eigen::Index d, Rng& rng) {
    if (d < 1) throw std::invalid_argument("haar_state: d must be >= 1");
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.complex_gaussian();
    return v / v.norm();
}

Matrix random_hermitian(Eigen::Index d, Rng& rng) {
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
    return 0.5 * (g + g.adjoint());
}

}  // namespace effdyn
