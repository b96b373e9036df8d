#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "effdyn/channel.hpp"
#include "effdyn/linalg.hpp"
#include "effdyn/random.hpp"
#include "effdyn/serialize.hpp"

#include <cstdio>
#include <sstream>

using namespace effdyn;

TEST_CASE("matrix text roundtrip preserves full precision") {
    Rng rng(41);
    const Matrix u = haar_unitary(5, rng);
    std::stringstream buf;
    write_matrix(buf, u);
    const Matrix back = read_matrix(buf);
    CHECK((u - back).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("matrix file roundtrip") {
    Rng rng(42);
    const Matrix m = random_hermitian(3, rng);
    const std::string path = "roundtrip.tmp";
    write_matrix_file(path, m);
    const Matrix back = read_matrix_file(path);
    std::remove(path.c_str());
    CHECK((m - back).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("malformed matrix input is rejected") {
    std::stringstream bad_header("x y\n1 0\n");
    CHECK_THROWS(read_matrix(bad_header));
    std::stringstream negative("-1 2\n");
    CHECK_THROWS(read_matrix(negative));
    std::stringstream truncated("2 2\n1 0 2 0\n3 0\n");
    CHECK_THROWS(read_matrix(truncated));
    CHECK_THROWS(read_matrix_file("no_such_file.mat"));
}

TEST_CASE("fidelity report JSON schema") {
    Rng rng(43);
    const BipartiteOperator u(2, 2, haar_unitary(4, rng));
    const DensityMatrix rho(Matrix(0.5 * Matrix::Identity(2, 2)));
    const Matrix u_ir = haar_unitary(2, rng);
    const FidelityReport rep = channel_fidelity_unitary_target(u, rho, u_ir);
    const nlohmann::json j = to_json(rep, 99);
    CHECK(j.at("fidelity").get<double>() == rep.fidelity);
    CHECK(j.at("d_ir").get<int>() == 2);
    CHECK(j.at("d_uv").get<int>() == 2);
    CHECK(j.at("unit_fidelity").get<bool>() == rep.is_unit_fidelity);
    CHECK(j.at("o_uv_unitarity_residual").get<double>() == rep.o_uv_unitarity_residual);
    CHECK(j.at("seed").get<std::uint64_t>() == 99);
}
