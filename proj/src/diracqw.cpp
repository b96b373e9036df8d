#include "effdyn/diracqw.hpp"

#include "effdyn/linalg.hpp"

#include <cmath>
#include <numbers>

namespace effdyn {

namespace {

constexpr double kPi = std::numbers::pi;
const complexd kI(0.0, 1.0);

// Translation T^n on an m-site ring, T|x⟩ = |x-1⟩.
Matrix translation_power(int m, int n) {
    Matrix t = Matrix::Zero(m, m);
    for (int x = 0; x < m; ++x) t(((x - n) % m + m) % m, x) = 1.0;
    return t;
}

// Projector onto the bin-momentum state |p⟩ on a 2L-site ring.
Matrix coarse_momentum_projector(int p, int half_size) {
    const int m = 2 * half_size;
    const double k = kPi * p / half_size;
    Matrix proj(m, m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            proj(x, y) = std::exp(-kI * k * static_cast<double>(x - y)) / static_cast<double>(m);
    return proj;
}

}  // namespace

void RingWalkConfig::validate() const {
    if (!(theta >= 0.0 && theta <= kPi / 4.0))
        throw std::invalid_argument("RingWalkConfig: theta must be in [0, pi/4]");
    if (half_size < 2) throw std::invalid_argument("RingWalkConfig: half_size must be >= 2");
}

double RingWalkConfig::fine_angle(int p) const {
    if (p < -2 * half_size || p >= 2 * half_size)
        throw std::out_of_range("fine momentum index out of the Brillouin zone");
    return kPi * p / (2.0 * half_size);
}

double RingWalkConfig::coarse_angle(int p) const {
    if (p < -half_size || p >= half_size)
        throw std::out_of_range("coarse momentum index out of the Brillouin zone");
    return kPi * p / half_size;
}

Matrix2 walk_block(const RingWalkConfig& cfg, int p) {
    const double k = cfg.fine_angle(p);
    const double c = std::cos(cfg.theta);
    const double s = std::sin(cfg.theta);
    Matrix2 u;
    u << std::exp(kI * k) * c, -kI * s, -kI * s, std::exp(-kI * k) * c;
    return u;
}

std::pair<int, int> coarse_grain_index(int x, int half_size) {
    if (x < 0 || x >= 4 * half_size) throw std::out_of_range("site index out of range");
    return {x / 2, x % 2};
}

int fold_to_coarse(int p, int half_size) {
    if (p < -2 * half_size || p >= 2 * half_size)
        throw std::out_of_range("fine momentum index out of the Brillouin zone");
    const int m = 2 * half_size;
    return ((p + half_size) % m + m) % m - half_size;
}

int alias_partner(int p_coarse, int half_size) {
    if (p_coarse < -half_size || p_coarse >= half_size)
        throw std::out_of_range("coarse momentum index out of the Brillouin zone");
    return p_coarse < 0 ? p_coarse + 2 * half_size : p_coarse - 2 * half_size;
}

BipartiteOperator walk_unitary(const RingWalkConfig& cfg) {
    cfg.validate();
    const int m = cfg.fine_sites();
    const double c = std::cos(cfg.theta);
    const double s = std::sin(cfg.theta);
    const Matrix eye = Matrix::Identity(m, m);
    Matrix u = Matrix::Zero(2 * m, 2 * m);
    u.block(0, 0, m, m) = c * translation_power(m, -1);  // T†
    u.block(0, m, m, m) = -kI * s * eye;
    u.block(m, 0, m, m) = -kI * s * eye;
    u.block(m, m, m, m) = c * translation_power(m, 1);  // T
    return BipartiteOperator(2 * cfg.coarse_sites(), 2, std::move(u));
}

WeakCouplingFamily u_squared_factorization(const RingWalkConfig& cfg) {
    cfg.validate();
    const int m = cfg.fine_sites();
    const int mc = cfg.coarse_sites();

    WeakCouplingFamily family;
    family.d_ir = 2 * mc;
    family.d_uv = 2;
    family.v_uv = Matrix::Identity(2, 2);
    family.v_ir = Matrix::Zero(2 * mc, 2 * mc);
    family.v_ir.block(0, 0, mc, mc) = translation_power(mc, -1);  // T_IR†
    family.v_ir.block(mc, mc, mc, mc) = translation_power(mc, 1);

    const Matrix t2 = translation_power(m, 2);
    const Matrix tsum = translation_power(m, 1) + translation_power(m, -1);
    family.u_mix = [m, t2, tsum](double t) -> Matrix {
        const double c = std::cos(t);
        const double s = std::sin(t);
        const Matrix a = c * c * Matrix::Identity(m, m) - s * s * t2;
        const Matrix b = s * c * tsum * t2;
        Matrix u = Matrix::Zero(2 * m, 2 * m);
        u.block(0, 0, m, m) = a;
        u.block(0, m, m, m) = -kI * b;
        u.block(m, 0, m, m) = -kI * b.adjoint();
        u.block(m, m, m, m) = a.adjoint();
        return u;
    };
    return family;
}

MixGenerator h_mix_dirac(const RingWalkConfig& cfg) {
    const int L = cfg.half_size;
    const int d_ir = 2 * cfg.coarse_sites();
    Matrix h = Matrix::Zero(2 * d_ir, 2 * d_ir);
    for (int p = -L; p < L; ++p) {
        const double phi = kPi * p / (2.0 * L);  // fine angle at the coarse index
        const double k = kPi * p / L;
        Matrix2 coin;
        coin << 0.0, std::exp(-kI * k), std::exp(kI * k), 0.0;
        Matrix2 uv;
        uv << 0.0, std::exp(kI * phi), std::exp(-kI * phi), 0.0;
        const Matrix ir = kron(coin, coarse_momentum_projector(p, L));
        h += (-2.0 * std::cos(phi)) * kron(ir, uv);
    }
    return make_mix_generator(h, d_ir, 2);
}

double gamma_factor(const BlochVector& r, double k) {
    return r.rx * (1.0 + std::cos(k)) - r.ry * std::sin(k);
}

Matrix2 h_ir_kernel(const BlochVector& r, double k) {
    const double g = gamma_factor(r, k);
    Matrix2 h;
    h << 0.0, -g * std::exp(-kI * k), -g * std::exp(kI * k), 0.0;
    return h;
}

Matrix2 effective_walk_block(const RingWalkConfig& cfg, const BlochVector& r, int p) {
    const double k = cfg.coarse_angle(p);
    const double m = gamma_factor(r, k) * cfg.theta;
    Matrix2 u;
    u << std::exp(kI * k) * std::cos(m), -kI * std::sin(m), -kI * std::sin(m),
        std::exp(-kI * k) * std::cos(m);
    return u;
}

DispersionResult dispersion(const RingWalkConfig& cfg, const std::optional<BlochVector>& r,
                            double k) {
    auto acos_clamped = [](double x) { return std::acos(std::clamp(x, -1.0, 1.0)); };
    DispersionResult out;
    out.omega = acos_clamped(std::cos(k) * std::cos(cfg.theta));
    if (r) out.omega_ir = acos_clamped(std::cos(k) * std::cos(gamma_factor(*r, k) * cfg.theta));
    return out;
}

double mu_dirac_closed(const BlochVector& r) {
    return 0.5 * (4.0 - 3.0 * r.rx * r.rx - r.ry * r.ry);
}

double mu_dirac_generic(const BlochVector& r, int half_size) {
    const RingWalkConfig cfg(0.0, half_size);
    const MixGenerator gen = h_mix_dirac(cfg);
    return mu(gen, r.density(), MuMethod::Direct);
}

double box_cos2_sum(int half_size) {
    double total = 0.0;
    for (int p = -half_size; p < half_size; ++p) {
        const double c = std::cos(kPi * p / (2.0 * half_size));
        total += c * c;
    }
    return 2.0 * total / half_size;
}

double box_rxy2_sum(const BlochVector& r, int half_size) {
    double total = 0.0;
    for (int p = -half_size; p < half_size; ++p) {
        const double k = kPi * p / half_size;
        const double rxy = r.rx * (1.0 + std::cos(k)) - r.ry * std::sin(k);
        total += rxy * rxy;
    }
    return total / (2.0 * half_size);
}

}  // namespace effdyn
