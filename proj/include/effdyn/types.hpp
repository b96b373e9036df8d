// types.hpp — Core aliases and small domain types shared by all modules.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace effdyn {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;
using complexd = std::complex<double>;

inline constexpr double kExactTol = 1e-12;  // exact algebraic identities
inline constexpr double kEigenTol = 1e-10;  // eigensolver-mediated identities

/// Hermiticity residual, max-abs entrywise.
inline double hermiticity_residual(const Matrix& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Unitarity residual ||A†A - I||, max-abs entrywise.
inline double unitarity_residual(const Matrix& a) {
    return (a.adjoint() * a - Matrix::Identity(a.cols(), a.cols())).cwiseAbs().maxCoeff();
}

/// Normalized trace Tr[A]/d. Used for the dimension-averaged expectation
/// on the observed factor; keeping it a named helper avoids factor-of-d bugs.
inline complexd normalized_trace(const Matrix& a) {
    return a.trace() / static_cast<double>(a.rows());
}

enum class Side { IR, UV };

/// Operator on a factored space H_IR ⊗ H_UV with a fixed internal
/// convention: row/column index = i_ir * d_uv + i_uv ("IR-major").
/// All modules use this ordering; conversions happen at boundaries only.
struct BipartiteOperator {
    Eigen::Index d_ir = 0;
    Eigen::Index d_uv = 0;
    Matrix matrix;

    BipartiteOperator() = default;
    BipartiteOperator(Eigen::Index dir, Eigen::Index duv, Matrix m)
        : d_ir(dir), d_uv(duv), matrix(std::move(m)) {
        if (matrix.rows() != d_ir * d_uv || matrix.cols() != d_ir * d_uv)
            throw std::invalid_argument("BipartiteOperator: matrix size does not match d_ir*d_uv");
    }

    Eigen::Index dim() const { return d_ir * d_uv; }
};

/// Density matrix with validity checks (Hermitian, unit trace, PSD up to
/// a small eigenvalue tolerance).
struct DensityMatrix {
    Matrix matrix;

    DensityMatrix() = default;
    explicit DensityMatrix(Matrix m) : matrix(std::move(m)) { validate(); }

    Eigen::Index dim() const { return matrix.rows(); }

    void validate() const {
        if (matrix.rows() != matrix.cols())
            throw std::invalid_argument("DensityMatrix: not square");
        if (std::abs(matrix.trace() - complexd(1.0)) > 1e-9)
            throw std::invalid_argument("DensityMatrix: trace != 1");
        if (hermiticity_residual(matrix) > 1e-9)
            throw std::invalid_argument("DensityMatrix: not Hermitian");
        Eigen::SelfAdjointEigenSolver<Matrix> es(matrix, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    }
};

/// (r_x, r_y, r_z) parameterizing a qubit state ρ = (1 + r·σ)/2.
struct BlochVector {
    double rx = 0.0;
    double ry = 0.0;
    double rz = 0.0;

    double norm2() const { return rx * rx + ry * ry + rz * rz; }

    DensityMatrix density() const {
        if (norm2() > 1.0 + 1e-12)
            throw std::invalid_argument("BlochVector: |r| > 1");
        Matrix rho(2, 2);
        const complexd i(0.0, 1.0);
        rho(0, 0) = 0.5 * (1.0 + rz);
        rho(0, 1) = 0.5 * (rx - i * ry);
        rho(1, 0) = 0.5 * (rx + i * ry);
        rho(1, 1) = 0.5 * (1.0 - rz);
        return DensityMatrix(rho);
    }
};

}  // namespace effdyn
