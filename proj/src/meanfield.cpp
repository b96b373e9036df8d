#include "effdyn/meanfield.hpp"

#include <cmath>

namespace effdyn {

namespace {

// h_λ(u,v) = Σ_ij B_λ(j,i) H[(i,u),(j,v)] / d_ir, without materializing kron.
Matrix uv_coefficient(const Matrix& h_mix, const Matrix& basis_element, Eigen::Index d_ir,
                      Eigen::Index d_uv) {
    Matrix out = Matrix::Zero(d_uv, d_uv);
    for (Eigen::Index i = 0; i < d_ir; ++i)
        for (Eigen::Index j = 0; j < d_ir; ++j) {
            const complexd b = basis_element(j, i);
            if (b == complexd(0.0)) continue;
            out += b * h_mix.block(i * d_uv, j * d_uv, d_uv, d_uv);
        }
    return out / static_cast<double>(d_ir);
}

double expect(const DensityMatrix& rho, const Matrix& a) {
    return (rho.matrix * a).trace().real();
}

}  // namespace

MixGenerator make_mix_generator(const Matrix& h_mix, Eigen::Index d_ir, Eigen::Index d_uv) {
    if (h_mix.rows() != d_ir * d_uv || h_mix.cols() != d_ir * d_uv)
        throw std::invalid_argument("make_mix_generator: size does not match d_ir*d_uv");
    if (hermiticity_residual(h_mix) > 1e-10)
        throw std::invalid_argument("make_mix_generator: h_mix is not Hermitian");
    MixGenerator gen;
    gen.d_ir = d_ir;
    gen.d_uv = d_uv;
    gen.h_mix = 0.5 * (h_mix + h_mix.adjoint());
    gen.ir_basis = hermitian_basis(d_ir);
    gen.uv_coefficients.reserve(gen.ir_basis.elements.size());
    for (const Matrix& b : gen.ir_basis.elements)
        gen.uv_coefficients.push_back(uv_coefficient(gen.h_mix, b, d_ir, d_uv));
    return gen;
}

MixGenerator extract_h_mix(const WeakCouplingFamily& family, double step) {
    if (!(step > 0.0 && step <= 0.1))
        throw std::invalid_argument("extract_h_mix: step must be in (0, 0.1]");
    const complexd i1(0.0, 1.0);
    auto central = [&](double s) -> Matrix {
        const Matrix up = family.u_mix(s);
        const Matrix dn = family.u_mix(-s);
        if (unitarity_residual(up) > 1e-10 || unitarity_residual(dn) > 1e-10)
            throw std::invalid_argument("extract_h_mix: family is not unitary at sampled theta");
        Matrix h = -i1 * (up - dn) / (2.0 * s);
        return 0.5 * (h + h.adjoint());
    };
    const Matrix h = central(step);
    const Matrix h_half = central(step / 2.0);
    // Central difference error is O(step²); the halved step must shrink it.
    const double diff = (h - h_half).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (diff > 10.0 * scale * step * step)
        throw std::runtime_error("extract_h_mix: Richardson self-check failed (family not analytic at 0?)");
    // Richardson extrapolation removes the leading O(step²) term.
    const Matrix refined = (4.0 * h_half - h) / 3.0;
    return make_mix_generator(refined, family.d_ir, family.d_uv);
}

Matrix mean_field_h_ir(const MixGenerator& gen, const DensityMatrix& rho_uv) {
    if (rho_uv.dim() != gen.d_uv)
        throw std::invalid_argument("mean_field_h_ir: rho_uv dimension mismatch");
    const Matrix weighted =
        kron(Matrix::Identity(gen.d_ir, gen.d_ir), rho_uv.matrix) * gen.h_mix;
    Matrix h_ir = partial_trace(weighted, gen.d_ir, gen.d_uv, Side::UV);
    return 0.5 * (h_ir + h_ir.adjoint());
}

Matrix effective_unitary(const Matrix& v_ir, const MixGenerator& gen,
                         const DensityMatrix& rho_uv, double theta) {
    if (std::abs(theta) > 0.5)
        throw std::invalid_argument("effective_unitary: |theta| must be <= 0.5");
    return v_ir * exp_i_hermitian(mean_field_h_ir(gen, rho_uv), theta);
}

Matrix effective_unitary(const WeakCouplingFamily& family, const DensityMatrix& rho_uv,
                         double theta) {
    const MixGenerator gen = extract_h_mix(family, 1e-4);
    return effective_unitary(family.v_ir, gen, rho_uv, theta);
}

double mu(const MixGenerator& gen, const DensityMatrix& rho_uv, MuMethod method) {
    if (rho_uv.dim() != gen.d_uv)
        throw std::invalid_argument("mu: rho_uv dimension mismatch");
    const double d_ir = static_cast<double>(gen.d_ir);
    switch (method) {
        case MuMethod::Direct: {
            // Four-term trace formula.
            const Matrix tr_ir_h2 =
                partial_trace(Matrix(gen.h_mix * gen.h_mix), gen.d_ir, gen.d_uv, Side::IR) / d_ir;
            const Matrix tr_ir_h =
                partial_trace(gen.h_mix, gen.d_ir, gen.d_uv, Side::IR) / d_ir;
            const Matrix h_ir = mean_field_h_ir(gen, rho_uv);
            const double t1 = expect(rho_uv, tr_ir_h2);
            const double t2 = expect(rho_uv, Matrix(tr_ir_h * tr_ir_h));
            const double t3 = (h_ir * h_ir).trace().real() / d_ir;
            const double t4 = std::pow(expect(rho_uv, tr_ir_h), 2.0);
            return t1 - t2 - t3 + t4;
        }
        case MuMethod::Correlator: {
            if (gen.uv_coefficients.empty())
                throw std::invalid_argument("mu: decomposition missing");
            const auto& basis = gen.ir_basis.elements;
            const std::size_t n = basis.size();
            std::vector<double> uv_mean(n);
            for (std::size_t a = 0; a < n; ++a)
                uv_mean[a] = expect(rho_uv, gen.uv_coefficients[a]);
            double total = 0.0;
            for (std::size_t a = 0; a < n; ++a) {
                const complexd mean_a = normalized_trace(basis[a]);
                for (std::size_t b = 0; b < n; ++b) {
                    const complexd ir_conn =
                        normalized_trace(Matrix(basis[a] * basis[b])) -
                        mean_a * normalized_trace(basis[b]);
                    if (std::abs(ir_conn) < 1e-15) continue;
                    const double uv_conn =
                        expect(rho_uv, Matrix(gen.uv_coefficients[a] * gen.uv_coefficients[b])) -
                        uv_mean[a] * uv_mean[b];
                    total += ir_conn.real() * uv_conn;
                }
            }
            return total;
        }
        case MuMethod::Variance: {
            if (gen.uv_coefficients.empty())
                throw std::invalid_argument("mu: decomposition missing");
            double total = 0.0;
            for (std::size_t a = 1; a < gen.uv_coefficients.size(); ++a) {
                const Matrix& h = gen.uv_coefficients[a];
                const double m = expect(rho_uv, h);
                total += expect(rho_uv, Matrix(h * h)) - m * m;
            }
            return total;
        }
    }
    throw std::logic_error("mu: unknown method");
}

double predicted_fidelity(const MixGenerator& gen, const DensityMatrix& rho_uv, double theta,
                          const std::optional<Matrix>& candidate_h_ir) {
    const double err = mu(gen, rho_uv, MuMethod::Direct);
    double variance_penalty = 0.0;
    if (candidate_h_ir) {
        if (hermiticity_residual(*candidate_h_ir) > 1e-10)
            throw std::invalid_argument("predicted_fidelity: candidate is not Hermitian");
        const Matrix delta = *candidate_h_ir - mean_field_h_ir(gen, rho_uv);
        const double mean = normalized_trace(delta).real();
        variance_penalty = normalized_trace(Matrix(delta * delta)).real() - mean * mean;
    }
    return 1.0 - theta * theta * (variance_penalty + err);
}

}  // namespace effdyn
