// Python bindings for the core operations. Eigen matrices map to NumPy
// complex arrays.

#include "effdyn/channel.hpp"
#include "effdyn/diracqw.hpp"
#include "effdyn/linalg.hpp"
#include "effdyn/meanfield.hpp"
#include "effdyn/optimizer.hpp"
#include "effdyn/random.hpp"
#include "effdyn/wavepacket.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace effdyn;

namespace {

MuMethod parse_mu_method(const std::string& name) {
    if (name == "direct") return MuMethod::Direct;
    if (name == "correlator") return MuMethod::Correlator;
    if (name == "variance") return MuMethod::Variance;
    throw std::invalid_argument("mu method must be direct, correlator, or variance");
}

}  // namespace

PYBIND11_MODULE(_effdyn, m) {
    m.doc() = "Coarse-grained effective dynamics: fidelity, mean-field rule, "
              "dissipation error, Dirac walk case study";

    py::class_<BlochVector>(m, "BlochVector")
        .def(py::init<double, double, double>(), py::arg("rx"), py::arg("ry"), py::arg("rz"))
        .def_readwrite("rx", &BlochVector::rx)
        .def_readwrite("ry", &BlochVector::ry)
        .def_readwrite("rz", &BlochVector::rz)
        .def("density", [](const BlochVector& r) { return r.density().matrix; });

    m.def("kron", &kron, py::arg("a"), py::arg("b"), "Tensor product, IR-major ordering");
    m.def(
        "partial_trace",
        [](const Matrix& mat, Eigen::Index d_ir, Eigen::Index d_uv, const std::string& side) {
            if (side != "ir" && side != "uv")
                throw std::invalid_argument("side must be 'ir' or 'uv'");
            return partial_trace(mat, d_ir, d_uv, side == "ir" ? Side::IR : Side::UV);
        },
        py::arg("matrix"), py::arg("d_ir"), py::arg("d_uv"), py::arg("side"));
    m.def("exp_i_hermitian", &exp_i_hermitian, py::arg("h"), py::arg("scale"));
    m.def(
        "trace_distance",
        [](const Matrix& rho, const Matrix& sigma) { return trace_distance(rho, sigma); },
        py::arg("rho"), py::arg("sigma"));
    m.def(
        "haar_unitary",
        [](Eigen::Index d, std::uint64_t seed) { return haar_unitary(d, seed); },
        py::arg("d"), py::arg("seed"));

    m.def(
        "channel_fidelity",
        [](const Matrix& u, Eigen::Index d_ir, Eigen::Index d_uv, const Matrix& rho_uv,
           const Matrix& u_ir) {
            const FidelityReport rep = channel_fidelity_unitary_target(
                BipartiteOperator(d_ir, d_uv, u), DensityMatrix(rho_uv), u_ir);
            return py::dict(py::arg("fidelity") = rep.fidelity,
                            py::arg("o_uv") = rep.o_uv,
                            py::arg("unit_fidelity") = rep.is_unit_fidelity,
                            py::arg("o_uv_unitarity_residual") = rep.o_uv_unitarity_residual);
        },
        py::arg("u"), py::arg("d_ir"), py::arg("d_uv"), py::arg("rho_uv"), py::arg("u_ir"),
        "Channel fidelity of Tr_UV[U(.x rho_UV)U^dag] against the unitary target");

    m.def(
        "mean_field_h_ir",
        [](const Matrix& h_mix, Eigen::Index d_ir, Eigen::Index d_uv, const Matrix& rho_uv) {
            return mean_field_h_ir(make_mix_generator(h_mix, d_ir, d_uv),
                                   DensityMatrix(rho_uv));
        },
        py::arg("h_mix"), py::arg("d_ir"), py::arg("d_uv"), py::arg("rho_uv"));

    m.def(
        "mu",
        [](const Matrix& h_mix, Eigen::Index d_ir, Eigen::Index d_uv, const Matrix& rho_uv,
           const std::string& method) {
            return mu(make_mix_generator(h_mix, d_ir, d_uv), DensityMatrix(rho_uv),
                      parse_mu_method(method));
        },
        py::arg("h_mix"), py::arg("d_ir"), py::arg("d_uv"), py::arg("rho_uv"),
        py::arg("method") = "direct", "Dissipation error of the mean-field approximation");

    m.def(
        "predicted_fidelity",
        [](const Matrix& h_mix, Eigen::Index d_ir, Eigen::Index d_uv, const Matrix& rho_uv,
           double theta) {
            return predicted_fidelity(make_mix_generator(h_mix, d_ir, d_uv),
                                      DensityMatrix(rho_uv), theta);
        },
        py::arg("h_mix"), py::arg("d_ir"), py::arg("d_uv"), py::arg("rho_uv"),
        py::arg("theta"));

    m.def(
        "maximize_fidelity",
        [](const Matrix& u, Eigen::Index d_ir, Eigen::Index d_uv, const Matrix& rho_uv,
           int restarts, std::uint64_t seed, std::optional<Matrix> warm_start) {
            OptimizerConfig cfg;
            cfg.restarts = restarts;
            cfg.seed = seed;
            const OptResult res = maximize_fidelity(BipartiteOperator(d_ir, d_uv, u),
                                                    DensityMatrix(rho_uv), cfg, warm_start);
            return py::dict(py::arg("best_unitary") = res.best_unitary,
                            py::arg("best_fidelity") = res.best_fidelity,
                            py::arg("iterations") = res.iterations,
                            py::arg("converged") = res.converged,
                            py::arg("restart_index") = res.restart_index);
        },
        py::arg("u"), py::arg("d_ir"), py::arg("d_uv"), py::arg("rho_uv"),
        py::arg("restarts") = 4, py::arg("seed") = 0, py::arg("warm_start") = py::none());

    m.def("phase_align", &phase_align, py::arg("a"), py::arg("b"));

    // Dirac walk case study.
    m.def(
        "walk_unitary",
        [](double theta, int half_size) {
            return walk_unitary(RingWalkConfig(theta, half_size)).matrix;
        },
        py::arg("theta"), py::arg("half_size"));
    m.def(
        "dispersion",
        [](double theta, double k, std::optional<BlochVector> r) {
            const DispersionResult d = dispersion(RingWalkConfig(theta, 2), r, k);
            return py::make_tuple(d.omega, d.omega_ir);
        },
        py::arg("theta"), py::arg("k"), py::arg("bloch") = py::none());
    m.def("gamma_factor", &gamma_factor, py::arg("bloch"), py::arg("k"));
    m.def("mu_dirac_closed", &mu_dirac_closed, py::arg("bloch"));
    m.def("mu_dirac_generic", &mu_dirac_generic, py::arg("bloch"), py::arg("half_size"));
    m.def(
        "effective_walk_block",
        [](double theta, int half_size, const BlochVector& r, int p) {
            return Matrix(effective_walk_block(RingWalkConfig(theta, half_size), r, p));
        },
        py::arg("theta"), py::arg("half_size"), py::arg("bloch"), py::arg("p"));

    // Wavepacket experiment.
    m.def(
        "trace_distance_series",
        [](double theta, int half_size, double sigma_k, double k0, int x0,
           const BlochVector& r, int n_max) {
            const RingWalkConfig cfg(theta, half_size);
            const GaussianPacketSpec spec{sigma_k, k0, x0, Band::Plus};
            return trace_distance_series(cfg, spec, r, n_max);
        },
        py::arg("theta"), py::arg("half_size"), py::arg("sigma_k"), py::arg("k0"),
        py::arg("x0"), py::arg("bloch"), py::arg("n_max"));
    m.def(
        "packet_uv_bloch",
        [](double theta, int half_size, double sigma_k, double k0, int x0) {
            const RingWalkConfig cfg(theta, half_size);
            return packet_uv_bloch(build_packet(cfg, GaussianPacketSpec{sigma_k, k0, x0,
                                                                        Band::Plus}));
        },
        py::arg("theta"), py::arg("half_size"), py::arg("sigma_k"), py::arg("k0"),
        py::arg("x0"));
}
