// linalg.hpp — Dense complex linear algebra over bipartite spaces:
// tensor products, partial traces, Hermitian operator bases, Hermitian
// exponentials and trace distance.

#pragma once

#include "effdyn/types.hpp"

#include <vector>

namespace effdyn {

/// Tensor product with IR-major ordering: (a ⊗ b)[(i*rb+k),(j*cb+l)] = a(i,j) b(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

/// Trace over the named factor of a bipartite operator.
/// side == UV returns a d_ir × d_ir matrix, side == IR a d_uv × d_uv one.
Matrix partial_trace(const BipartiteOperator& op, Side side);
Matrix partial_trace(const Matrix& m, Eigen::Index d_ir, Eigen::Index d_uv, Side side);

/// Basis of Hermitian operators on a d-dimensional space, generalized
/// Gell-Mann construction rescaled so that Tr[B_a B_b] = d δ_ab.
/// Element 0 is the identity; elements 1..d²-1 are traceless.
struct HermitianBasis {
    Eigen::Index d = 0;
    std::vector<Matrix> elements;

    Eigen::Index size() const { return static_cast<Eigen::Index>(elements.size()); }
};

HermitianBasis hermitian_basis(Eigen::Index d);

/// exp(i·scale·h) for Hermitian h, via eigendecomposition. Unitary to
/// rounding; rejects non-Hermitian input.
Matrix exp_i_hermitian(const Matrix& h, double scale);

/// ½ Σ|λ_i| over eigenvalues of ρ - σ.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const Matrix& rho, const Matrix& sigma);

}  // namespace effdyn
