#include "effdyn/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace effdyn {

Matrix read_matrix(std::istream& in) {
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows < 1 || cols < 1)
        throw std::runtime_error("matrix file: bad header (expected 'rows cols')");
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im))
                throw std::runtime_error("matrix file: truncated at entry (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
            m(i, j) = complexd(re, im);
        }
    return m;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
    out << m.rows() << " " << m.cols() << "\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << " ";
            out << m(i, j).real() << " " << m(i, j).imag();
        }
        out << "\n";
    }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file: " + path);
    write_matrix(out, m);
}

nlohmann::json to_json(const FidelityReport& report, std::uint64_t seed) {
    return nlohmann::json{{"fidelity", report.fidelity},
                          {"d_ir", report.d_ir},
                          {"d_uv", report.d_uv},
                          {"unit_fidelity", report.is_unit_fidelity},
                          {"o_uv_unitarity_residual", report.o_uv_unitarity_residual},
                          {"seed", seed}};
}

}  // namespace effdyn
