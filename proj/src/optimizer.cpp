#include "effdyn/optimizer.hpp"

#include "effdyn/linalg.hpp"
#include "effdyn/random.hpp"

#include <cmath>
#include <vector>

namespace effdyn {

namespace {

Matrix unitarize(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

double objective(const BipartiteOperator& u, const DensityMatrix& rho_uv, const Matrix& w) {
    const Matrix o = o_uv(u, w);
    const double d2 = static_cast<double>(u.d_ir * u.d_ir);
    return (o * rho_uv.matrix * o.adjoint()).trace().real() / d2;
}

struct RestartOutcome {
    Matrix unitary;
    double fidelity = 0.0;
    int iterations = 0;
    bool converged = false;
};

RestartOutcome ascend(const BipartiteOperator& u, const DensityMatrix& rho_uv,
                      const OptimizerConfig& cfg, Matrix w) {
    const HermitianBasis basis = hermitian_basis(u.d_ir);
    const std::size_t n_params = basis.elements.size() - 1;  // traceless directions only
    RestartOutcome out;
    double f = objective(u, rho_uv, w);
    double step = cfg.initial_step;
    const double h = cfg.fd_step;
    std::vector<double> grad(n_params);

    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        double gnorm2 = 0.0;
        for (std::size_t a = 0; a < n_params; ++a) {
            const Matrix& b = basis.elements[a + 1];
            const double fp = objective(u, rho_uv, Matrix(w * exp_i_hermitian(b, h)));
            const double fm = objective(u, rho_uv, Matrix(w * exp_i_hermitian(b, -h)));
            grad[a] = (fp - fm) / (2.0 * h);
            gnorm2 += grad[a] * grad[a];
        }
        if (std::sqrt(gnorm2) < cfg.grad_tolerance) {
            out.converged = true;
            break;
        }
        Matrix direction = Matrix::Zero(u.d_ir, u.d_ir);
        for (std::size_t a = 0; a < n_params; ++a) direction += grad[a] * basis.elements[a + 1];

        bool accepted = false;
        double t = step;
        while (t > 1e-14) {
            const Matrix cand = unitarize(Matrix(w * exp_i_hermitian(direction, t)));
            const double fc = objective(u, rho_uv, cand);
            if (fc >= f + 1e-4 * t * gnorm2) {
                w = cand;
                f = fc;
                step = std::min(cfg.initial_step, 2.0 * t);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // Line search exhausted at the finite-difference noise floor.
            out.converged = true;
            ++iter;
            break;
        }
    }
    out.unitary = std::move(w);
    out.fidelity = f;
    out.iterations = iter;
    return out;
}

}  // namespace

OptResult maximize_fidelity(const BipartiteOperator& u, const DensityMatrix& rho_uv,
                            const OptimizerConfig& cfg,
                            const std::optional<Matrix>& warm_start) {
    if (cfg.restarts < 1 || cfg.grad_tolerance <= 0.0)
        throw std::invalid_argument("maximize_fidelity: invalid config");
    if (u.d_ir > 16)
        throw std::invalid_argument("maximize_fidelity: oracle is limited to d_ir <= 16");
    if (unitarity_residual(u.matrix) > 1e-10)
        throw std::invalid_argument("maximize_fidelity: u is not unitary");

    OptResult best;
    bool have_best = false;
    for (int r = 0; r < cfg.restarts; ++r) {
        Matrix start;
        if (r == 0 && warm_start) {
            if (warm_start->rows() != u.d_ir || warm_start->cols() != u.d_ir)
                throw std::invalid_argument("maximize_fidelity: warm_start dimension mismatch");
            start = *warm_start;
        } else {
            start = haar_unitary(u.d_ir, cfg.seed + static_cast<std::uint64_t>(r));
        }
        RestartOutcome outcome = ascend(u, rho_uv, cfg, std::move(start));
        // Deterministic tie-breaking: keep the first result within 1e-12.
        if (!have_best || outcome.fidelity > best.best_fidelity + 1e-12) {
            best.best_unitary = std::move(outcome.unitary);
            best.best_fidelity = outcome.fidelity;
            best.iterations = outcome.iterations;
            best.converged = outcome.converged;
            best.restart_index = r;
            have_best = true;
        }
    }
    return best;
}

double phase_align(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("phase_align: dimension mismatch");
    // ||a - e^{iφ}b||² = ||a||² + ||b||² − 2 Re[e^{iφ} Tr[a† b]], minimized
    // when the phase cancels the overlap's argument.
    const double overlap = std::abs((a.adjoint() * b).trace());
    const double val = a.squaredNorm() + b.squaredNorm() - 2.0 * overlap;
    return std::sqrt(std::max(0.0, val));
}

}  // namespace effdyn
