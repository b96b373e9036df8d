#include "effdyn/wavepacket.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace effdyn {

namespace {

constexpr double kPi = std::numbers::pi;
const complexd kI(0.0, 1.0);

using MomentumRep = std::vector<Vector2>;  // index p + 2L, p in [-2L, 2L-1]

MomentumRep to_momentum(const RingState& state) {
    const int m = state.fine_sites();
    const int L = state.half_size;
    MomentumRep rep(m, Vector2::Zero());
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    for (int p = -2 * L; p < 2 * L; ++p) {
        const double k = kPi * p / (2.0 * L);
        Vector2 s = Vector2::Zero();
        for (int x = 0; x < m; ++x) {
            const complexd phase = std::exp(kI * k * static_cast<double>(x)) * norm;
            s(0) += phase * state.at(0, x);
            s(1) += phase * state.at(1, x);
        }
        rep[p + 2 * L] = s;
    }
    return rep;
}

RingState from_momentum(int half_size, const MomentumRep& rep) {
    const int m = 4 * half_size;
    RingState state;
    state.half_size = half_size;
    state.amplitudes = Vector::Zero(2 * m);
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    for (int p = -2 * half_size; p < 2 * half_size; ++p) {
        const double k = kPi * p / (2.0 * half_size);
        const Vector2& s = rep[p + 2 * half_size];
        for (int x = 0; x < m; ++x) {
            const complexd phase = std::exp(-kI * k * static_cast<double>(x)) * norm;
            state.at(0, x) += phase * s(0);
            state.at(1, x) += phase * s(1);
        }
    }
    return state;
}

MomentumRep packet_momentum(const RingWalkConfig& cfg, const GaussianPacketSpec& spec) {
    if (spec.sigma_k <= 0.0) throw std::invalid_argument("build_packet: sigma_k must be > 0");
    const int L = cfg.half_size;
    const double dk = kPi / (2.0 * L);
    // The discrete grid must resolve the Gaussian.
    int in_window = 0;
    for (int p = -2 * L; p < 2 * L; ++p)
        if (std::abs(p * dk - spec.k0) <= 3.0 * spec.sigma_k) ++in_window;
    if (in_window < 8)
        throw std::invalid_argument(
            "build_packet: momentum grid under-resolves the packet (need >= 8 points in +-3 sigma)");

    MomentumRep rep(4 * L, Vector2::Zero());
    double norm2 = 0.0;
    for (int p = -2 * L; p < 2 * L; ++p) {
        const double k = p * dk;
        const double arg = (k - spec.k0) / spec.sigma_k;
        const complexd amp =
            std::exp(-0.5 * arg * arg) * std::exp(kI * k * static_cast<double>(spec.x0));
        const BandEigensystem eig = band_eigensystem(cfg, p);
        const Vector2 w = (spec.band == Band::Plus) ? eig.w_plus : eig.w_minus;
        rep[p + 2 * L] = amp * w;
        norm2 += std::norm(amp);
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& s : rep) s *= scale;
    return rep;
}

// Parity-resolved IR vectors in the bin-momentum basis, index c*2L + (q+L).
// a_u[(c,q)] = 2^{-1/2} Σ_{p -> q} e^{-i φ_p u} s_p[c].
std::array<Vector, 2> fold_parity_vectors(int half_size, const MomentumRep& rep) {
    const int L = half_size;
    std::array<Vector, 2> out{Vector::Zero(4 * L), Vector::Zero(4 * L)};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int q = -L; q < L; ++q) {
        const int p2 = alias_partner(q, L);
        const double phi1 = kPi * q / (2.0 * L);
        const double phi2 = kPi * p2 / (2.0 * L);
        const Vector2& s1 = rep[q + 2 * L];
        const Vector2& s2 = rep[p2 + 2 * L];
        for (int c = 0; c < 2; ++c) {
            const Eigen::Index idx = c * 2 * L + (q + L);
            out[0](idx) = inv_sqrt2 * (s1(c) + s2(c));
            out[1](idx) =
                inv_sqrt2 * (std::exp(-kI * phi1) * s1(c) + std::exp(-kI * phi2) * s2(c));
        }
    }
    return out;
}

// ½ Σ|λ| of Σ_i s_i v_i v_i† (v_i the columns, s_i the signs). The matrix
// lives in the column span, so with columns = QR it is similar to R S R†,
// an m×m Hermitian matrix. The QR route avoids Gram square roots, whose
// √ε noise would spoil exact cancellations (E_0 must vanish to rounding).
double trace_norm_low_rank(const Matrix& columns, const Eigen::VectorXd& signs) {
    const Eigen::Index m = columns.cols();
    Eigen::HouseholderQR<Matrix> qr(columns);
    const Matrix r = qr.matrixQR().topRows(m).template triangularView<Eigen::Upper>();
    const Matrix projected = r * signs.asDiagonal() * r.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(projected, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::string band_name(Band b) { return b == Band::Plus ? "plus" : "minus"; }

}  // namespace

BandEigensystem band_eigensystem(const RingWalkConfig& cfg, int p) {
    const double k = cfg.fine_angle(p);
    const double s = std::sin(cfg.theta);
    const double c = std::cos(cfg.theta);
    BandEigensystem out;
    out.omega = std::acos(std::clamp(c * std::cos(k), -1.0, 1.0));
    if (s < 1e-14) {
        // Diagonal walk: coin basis, deterministically.
        if (k > 0.0) {
            out.w_plus = Vector2(0.0, 1.0);
            out.w_minus = Vector2(1.0, 0.0);
        } else if (k < 0.0) {
            out.w_plus = Vector2(1.0, 0.0);
            out.w_minus = Vector2(0.0, 1.0);
        } else {
            out.w_plus = Vector2(0.0, 1.0);
            out.w_minus = Vector2(1.0, 0.0);
        }
        return out;
    }
    const double sw = std::sin(out.omega);
    const complexd h_plus = -kI * (sw + c * std::sin(k));
    const complexd h_minus = -kI * (-sw + c * std::sin(k));
    const double m_plus = std::sqrt(s * s + std::norm(h_plus));
    const double m_minus = std::sqrt(s * s + std::norm(h_minus));
    out.w_plus = Vector2(-kI * s, h_plus) / m_plus;
    out.w_minus = Vector2(-kI * s, h_minus) / m_minus;
    return out;
}

RingState build_packet(const RingWalkConfig& cfg, const GaussianPacketSpec& spec) {
    return from_momentum(cfg.half_size, packet_momentum(cfg, spec));
}

RingState evolve_exact(const RingWalkConfig& cfg, const RingState& state, int double_steps) {
    if (double_steps < 0) throw std::invalid_argument("evolve_exact: negative step count");
    if (state.half_size != cfg.half_size)
        throw std::invalid_argument("evolve_exact: state/config size mismatch");
    MomentumRep rep = to_momentum(state);
    const int L = cfg.half_size;
    for (int p = -2 * L; p < 2 * L; ++p) {
        const BandEigensystem eig = band_eigensystem(cfg, p);
        Vector2& s = rep[p + 2 * L];
        const complexd a_plus = eig.w_plus.dot(s);    // ⟨w_+|s⟩
        const complexd a_minus = eig.w_minus.dot(s);
        const complexd ph = std::exp(-kI * (2.0 * double_steps) * eig.omega);
        s = ph * a_plus * eig.w_plus + std::conj(ph) * a_minus * eig.w_minus;
    }
    return from_momentum(L, rep);
}

Matrix LowRankDensity::dense() const {
    Matrix out = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < factors.size(); ++i)
        out += weights[i] * (factors[i] * factors[i].adjoint());
    return out;
}

LowRankDensity reduce_to_ir(const RingState& state) {
    const int L = state.half_size;
    LowRankDensity rho;
    rho.dim = 4 * L;
    for (int parity = 0; parity < 2; ++parity) {
        Vector v = Vector::Zero(4 * L);
        for (int c = 0; c < 2; ++c)
            for (int xir = 0; xir < 2 * L; ++xir) v(c * 2 * L + xir) = state.at(c, 2 * xir + parity);
        const double w = v.squaredNorm();
        rho.weights.push_back(w);
        rho.factors.push_back(w > 0.0 ? Vector(v / std::sqrt(w)) : v);
    }
    return rho;
}

LowRankDensity evolve_effective(const RingWalkConfig& cfg, const BlochVector& r,
                                const LowRankDensity& rho, int steps) {
    if (steps < 0) throw std::invalid_argument("evolve_effective: negative step count");
    const int L = cfg.half_size;
    if (rho.dim != 4 * L) throw std::invalid_argument("evolve_effective: dimension mismatch");
    // Per-momentum block powers, once.
    std::vector<Matrix2> powers;
    powers.reserve(2 * L);
    for (int q = -L; q < L; ++q) {
        const Matrix2 block = effective_walk_block(cfg, r, q);
        Eigen::ComplexEigenSolver<Matrix2> es(block);
        Vector2 lam;
        for (int i = 0; i < 2; ++i)
            lam(i) = std::exp(kI * static_cast<double>(steps) * std::arg(es.eigenvalues()(i)));
        powers.push_back(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().inverse());
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(2 * L));
    LowRankDensity out;
    out.dim = rho.dim;
    out.weights = rho.weights;
    for (const Vector& v : rho.factors) {
        // Bin DFT, per-momentum block power, inverse DFT.
        std::vector<Vector2> hat(2 * L, Vector2::Zero());
        for (int q = -L; q < L; ++q) {
            const double k = kPi * q / L;
            Vector2 comp = Vector2::Zero();
            for (int x = 0; x < 2 * L; ++x) {
                const complexd phase = std::exp(kI * k * static_cast<double>(x)) * norm;
                comp(0) += phase * v(x);
                comp(1) += phase * v(2 * L + x);
            }
            hat[q + L] = powers[q + L] * comp;
        }
        Vector evolved = Vector::Zero(4 * L);
        for (int q = -L; q < L; ++q) {
            const double k = kPi * q / L;
            for (int x = 0; x < 2 * L; ++x) {
                const complexd phase = std::exp(-kI * k * static_cast<double>(x)) * norm;
                evolved(x) += phase * hat[q + L](0);
                evolved(2 * L + x) += phase * hat[q + L](1);
            }
        }
        out.factors.push_back(std::move(evolved));
    }
    return out;
}

BlochVector packet_uv_bloch(const RingState& state) {
    const int L = state.half_size;
    Matrix2 rho = Matrix2::Zero();
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v)
            for (int c = 0; c < 2; ++c)
                for (int xir = 0; xir < 2 * L; ++xir)
                    rho(u, v) += state.at(c, 2 * xir + u) * std::conj(state.at(c, 2 * xir + v));
    BlochVector r;
    r.rx = 2.0 * rho(0, 1).real();
    r.ry = -2.0 * rho(0, 1).imag();
    r.rz = (rho(0, 0) - rho(1, 1)).real();
    return r;
}

std::vector<std::pair<int, double>> trace_distance_series(const RingWalkConfig& cfg,
                                                          const GaussianPacketSpec& spec,
                                                          const BlochVector& r, int n_max) {
    if (n_max < 1) throw std::invalid_argument("trace_distance_series: n_max must be >= 1");
    const int L = cfg.half_size;
    MomentumRep rep = packet_momentum(cfg, spec);

    // Exact side: spectral components per fine momentum, advanced by the
    // U² eigenphases each step.
    struct FineMode {
        Vector2 w_plus, w_minus;
        complexd a_plus, a_minus;
        complexd step_phase;  // e^{-2iω}
    };
    std::vector<FineMode> modes(4 * L);
    for (int p = -2 * L; p < 2 * L; ++p) {
        const BandEigensystem eig = band_eigensystem(cfg, p);
        FineMode& fm = modes[p + 2 * L];
        fm.w_plus = eig.w_plus;
        fm.w_minus = eig.w_minus;
        fm.a_plus = eig.w_plus.dot(rep[p + 2 * L]);
        fm.a_minus = eig.w_minus.dot(rep[p + 2 * L]);
        fm.step_phase = std::exp(-kI * 2.0 * eig.omega);
    }

    // Effective side: eigendecomposed blocks per coarse momentum.
    struct CoarseMode {
        Matrix2 vectors, vectors_inv;
        Vector2 step_phase;
        Vector2 coeff[2];  // per parity factor
    };
    const std::array<Vector, 2> parity0 = fold_parity_vectors(L, rep);
    std::vector<CoarseMode> coarse(2 * L);
    for (int q = -L; q < L; ++q) {
        CoarseMode& cm = coarse[q + L];
        Eigen::ComplexEigenSolver<Matrix2> es(effective_walk_block(cfg, r, q));
        cm.vectors = es.eigenvectors();
        cm.vectors_inv = cm.vectors.inverse();
        for (int i = 0; i < 2; ++i) cm.step_phase(i) = std::exp(kI * std::arg(es.eigenvalues()(i)));
        for (int u = 0; u < 2; ++u) {
            Vector2 comp(parity0[u](q + L), parity0[u](2 * L + (q + L)));
            cm.coeff[u] = cm.vectors_inv * comp;
        }
    }

    Eigen::VectorXd signs(4);
    signs << 1.0, 1.0, -1.0, -1.0;
    std::vector<std::pair<int, double>> series;
    series.reserve(n_max + 1);
    Matrix columns(4 * L, 4);

    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) {
            for (auto& fm : modes) {
                fm.a_plus *= fm.step_phase;
                fm.a_minus *= std::conj(fm.step_phase);
            }
            for (auto& cm : coarse)
                for (int u = 0; u < 2; ++u) cm.coeff[u] = cm.step_phase.cwiseProduct(cm.coeff[u]);
        }
        // Exact parity vectors from the folded momentum representation.
        MomentumRep current(4 * L);
        for (int p = -2 * L; p < 2 * L; ++p) {
            const FineMode& fm = modes[p + 2 * L];
            current[p + 2 * L] = fm.a_plus * fm.w_plus + fm.a_minus * fm.w_minus;
        }
        const std::array<Vector, 2> exact = fold_parity_vectors(L, current);
        columns.col(0) = exact[0];
        columns.col(1) = exact[1];
        for (int u = 0; u < 2; ++u) {
            Vector b = Vector::Zero(4 * L);
            for (int q = -L; q < L; ++q) {
                const CoarseMode& cm = coarse[q + L];
                const Vector2 comp = cm.vectors * cm.coeff[u];
                b(q + L) = comp(0);
                b(2 * L + (q + L)) = comp(1);
            }
            columns.col(2 + u) = b;
        }
        series.emplace_back(n, trace_norm_low_rank(columns, signs));
    }
    return series;
}

ExperimentConfig parse_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string key, eq, value;
        std::istringstream ls(line);
        if (!(ls >> key)) continue;
        ls >> eq;
        if (eq != "=") {
            value = eq;  // "key value" form
        } else {
            ls >> value;
        }
        if (value.empty())
            throw std::runtime_error("config parse error at line " + std::to_string(lineno));
        if (key == "L") cfg.half_size = std::stoi(value);
        else if (key == "theta") cfg.theta = std::stod(value);
        else if (key == "sigma_k") cfg.sigma_k = std::stod(value);
        else if (key == "k0") cfg.k0 = std::stod(value);
        else if (key == "x0") cfg.x0 = std::stoi(value);
        else if (key == "band") cfg.band = (value == "minus") ? Band::Minus : Band::Plus;
        else if (key == "n_max") cfg.n_max = std::stoi(value);
        else if (key == "r_x") cfg.rx = std::stod(value);
        else if (key == "r_y") cfg.ry = std::stod(value);
        else if (key == "r_z") cfg.rz = std::stod(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "out_csv") cfg.out_csv = value;
        else if (key == "out_json") cfg.out_json = value;
        else throw std::runtime_error("unknown config key: " + key);
    }
    return cfg;
}

LinearFit fit_series(const std::vector<std::pair<int, double>>& series, int n_lo, int n_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int count = 0;
    for (const auto& [n, e] : series) {
        if (n < n_lo || n > n_hi) continue;
        const double x = n;
        sx += x;
        sy += e;
        sxx += x * x;
        sxy += x * e;
        syy += e * e;
        ++count;
    }
    if (count < 2) throw std::invalid_argument("fit_series: fewer than two points in window");
    const double nn = count;
    const double denom = nn * sxx - sx * sx;
    LinearFit fit;
    fit.slope = (nn * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / nn;
    const double ss_tot = syy - sy * sy / nn;
    double ss_res = 0.0;
    for (const auto& [n, e] : series) {
        if (n < n_lo || n > n_hi) continue;
        const double resid = e - (fit.intercept + fit.slope * n);
        ss_res += resid * resid;
    }
    fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    const RingWalkConfig walk(config.theta, config.half_size);
    const GaussianPacketSpec spec{config.sigma_k, config.k0, config.x0, config.band};

    ExperimentSummary summary;
    summary.config = config;
    if (config.rx || config.ry || config.rz) {
        summary.bloch_used = BlochVector{config.rx.value_or(0.0), config.ry.value_or(0.0),
                                         config.rz.value_or(0.0)};
    } else {
        summary.bloch_used = packet_uv_bloch(build_packet(walk, spec));
        const double n2 = summary.bloch_used.norm2();
        if (n2 > 1.0) {  // clip rounding overshoot
            const double s = 1.0 / std::sqrt(n2);
            summary.bloch_used.rx *= s;
            summary.bloch_used.ry *= s;
            summary.bloch_used.rz *= s;
        }
        summary.bloch_from_packet = true;
    }

    const auto series = trace_distance_series(walk, spec, summary.bloch_used, config.n_max);
    for (const auto& [n, e] : series) summary.max_e = std::max(summary.max_e, e);
    summary.fit_lo = std::min(20, std::max(0, config.n_max - 1));
    summary.fit_hi = std::min(100, config.n_max);
    summary.fit = fit_series(series, summary.fit_lo, summary.fit_hi);
    summary.runtime_ms =
        std::chrono::duration<double, std::milli>(clock::now() - t0).count();

    try {
        {
            std::ofstream csv(config.out_csv);
            if (!csv) throw std::runtime_error("cannot write " + config.out_csv);
            csv << "n,trace_distance\n" << std::setprecision(17);
            for (const auto& [n, e] : series) csv << n << "," << e << "\n";
        }
        nlohmann::json j;
        j["params"] = {{"L", config.half_size}, {"theta", config.theta},
                       {"sigma_k", config.sigma_k}, {"k0", config.k0},
                       {"x0", config.x0}, {"band", band_name(config.band)},
                       {"n_max", config.n_max}};
        j["bloch"] = {{"r_x", summary.bloch_used.rx}, {"r_y", summary.bloch_used.ry},
                      {"r_z", summary.bloch_used.rz},
                      {"from_packet", summary.bloch_from_packet}};
        j["slope"] = summary.fit.slope;
        j["intercept"] = summary.fit.intercept;
        j["r2"] = summary.fit.r2;
        j["fit_window"] = {summary.fit_lo, summary.fit_hi};
        j["max_E"] = summary.max_e;
        j["runtime_ms"] = summary.runtime_ms;
        j["seed"] = config.seed;
        std::ofstream js(config.out_json);
        if (!js) throw std::runtime_error("cannot write " + config.out_json);
        js << j.dump(2) << "\n";
    } catch (...) {
        std::remove(config.out_csv.c_str());
        std::remove(config.out_json.c_str());
        throw;
    }
    return summary;
}

}  // namespace effdyn
