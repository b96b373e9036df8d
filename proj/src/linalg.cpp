#include "effdyn/linalg.hpp"

#include <cmath>

namespace effdyn {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix partial_trace(const Matrix& m, Eigen::Index d_ir, Eigen::Index d_uv, Side side) {
    if (m.rows() != d_ir * d_uv || m.cols() != d_ir * d_uv)
        throw std::invalid_argument("partial_trace: matrix size does not match d_ir*d_uv");
    if (side == Side::UV) {
        Matrix out = Matrix::Zero(d_ir, d_ir);
        for (Eigen::Index i = 0; i < d_ir; ++i)
            for (Eigen::Index j = 0; j < d_ir; ++j)
                for (Eigen::Index u = 0; u < d_uv; ++u)
                    out(i, j) += m(i * d_uv + u, j * d_uv + u);
        return out;
    }
    Matrix out = Matrix::Zero(d_uv, d_uv);
    for (Eigen::Index u = 0; u < d_uv; ++u)
        for (Eigen::Index v = 0; v < d_uv; ++v)
            for (Eigen::Index i = 0; i < d_ir; ++i)
                out(u, v) += m(i * d_uv + u, i * d_uv + v);
    return out;
}

Matrix partial_trace(const BipartiteOperator& op, Side side) {
    return partial_trace(op.matrix, op.d_ir, op.d_uv, side);
}

HermitianBasis hermitian_basis(Eigen::Index d) {
    if (d < 1) throw std::invalid_argument("hermitian_basis: d must be >= 1");
    HermitianBasis basis;
    basis.d = d;
    basis.elements.reserve(static_cast<std::size_t>(d * d));
    basis.elements.push_back(Matrix::Identity(d, d));
    const double s = std::sqrt(static_cast<double>(d) / 2.0);
    const complexd i1(0.0, 1.0);
    // Off-diagonal symmetric / antisymmetric pairs.
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            Matrix sym = Matrix::Zero(d, d);
            sym(j, k) = s;
            sym(k, j) = s;
            basis.elements.push_back(sym);
            Matrix asym = Matrix::Zero(d, d);
            asym(j, k) = -i1 * s;
            asym(k, j) = i1 * s;
            basis.elements.push_back(asym);
        }
    }
    // Diagonal ladder, Tr[B²] = d.
    for (Eigen::Index l = 1; l < d; ++l) {
        Matrix diag = Matrix::Zero(d, d);
        const double c = std::sqrt(static_cast<double>(d) / static_cast<double>(l * (l + 1)));
        for (Eigen::Index j = 0; j < l; ++j) diag(j, j) = c;
        diag(l, l) = -c * static_cast<double>(l);
        basis.elements.push_back(diag);
    }
    return basis;
}

Matrix exp_i_hermitian(const Matrix& h, double scale) {
    if (hermiticity_residual(h) > 1e-10)
        throw std::invalid_argument("exp_i_hermitian: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXd& ev = es.eigenvalues();
    Vector phases(ev.size());
    const complexd i1(0.0, 1.0);
    for (Eigen::Index k = 0; k < ev.size(); ++k) phases(k) = std::exp(i1 * scale * ev(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho - sigma, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return trace_distance(rho.matrix, sigma.matrix);
}

}  // namespace effdyn
