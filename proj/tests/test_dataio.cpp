#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "gmcs/dataio.hpp"
#include "gmcs/datagen.hpp"
#include "gmcs/linalg.hpp"

using gmcs::Instance;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/gmcs_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
    void write(const std::string& content) {
        std::ofstream f(path);
        f << content;
    }
    std::string read() const {
        std::ifstream f(path);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
};

}  // namespace

TEST_CASE("csv round trip of known values") {
    TempFile fa("a.csv"), fy("y.csv");
    fa.write("1.5,2,-3\n0,4.25,6e-2\n");
    fy.write("7\n-8.5\n");
    const Instance inst = gmcs::load_csv(fa.path, fy.path);
    CHECK(inst.M() == 2);
    CHECK(inst.N() == 3);
    CHECK(inst.A()(0, 0) == 1.5);
    CHECK(inst.A()(1, 2) == 0.06);
    CHECK(inst.y()(1) == -8.5);
}

TEST_CASE("csv errors name the offending cell") {
    TempFile fa("bad_a.csv"), fy("bad_y.csv");
    fa.write("1,2\n3,oops\n");
    fy.write("1\n2\n");
    CHECK_THROWS_WITH(gmcs::load_csv(fa.path, fy.path),
                      Catch::Matchers::ContainsSubstring("row 2") &&
                          Catch::Matchers::ContainsSubstring("column 2"));
}

TEST_CASE("csv shape mismatches are typed errors") {
    TempFile fa("sa.csv"), fy("sy.csv");
    fa.write("1,2\n3,4\n");
    fy.write("1\n");
    CHECK_THROWS_AS(gmcs::load_csv(fa.path, fy.path), gmcs::ShapeMismatch);

    TempFile fr("ragged.csv"), fy2("sy2.csv");
    fr.write("1,2\n3\n");
    fy2.write("1\n2\n");
    CHECK_THROWS_AS(gmcs::load_csv(fr.path, fy2.path), gmcs::ShapeMismatch);
}

TEST_CASE("header flag skips one line") {
    TempFile fa("ha.csv"), fy("hy.csv");
    fa.write("c1,c2\n1,2\n");
    fy.write("resp\n3\n");
    const Instance inst = gmcs::load_csv(fa.path, fy.path, true);
    CHECK(inst.M() == 1);
    CHECK(inst.A()(0, 1) == 2.0);
}

TEST_CASE("standardize rejects constant columns") {
    Eigen::MatrixXd A(3, 2);
    A << 1, 1, 2, 1, 3, 1;
    Eigen::VectorXd y(3);
    y << 1, 2, 3;
    try {
        gmcs::standardize(Instance(A, y));
        FAIL("expected ZeroVarianceColumn");
    } catch (const gmcs::ZeroVarianceColumn& e) {
        CHECK(e.column == 1);
    }
}

TEST_CASE("standardize arithmetic on a known column") {
    Eigen::MatrixXd A(3, 1);
    A << 0, 1, 2;
    Eigen::VectorXd y(3);
    y << 4, 5, 6;
    const auto std_data = gmcs::standardize(Instance(A, y));
    const double s = std::sqrt(2.0);
    CHECK(std_data.data.A()(0, 0) == Catch::Approx(-1.0 / s));
    CHECK(std_data.data.A()(1, 0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(std_data.data.A()(2, 0) == Catch::Approx(1.0 / s));
    CHECK(std_data.y_mean == Catch::Approx(5.0));
    CHECK(std_data.data.y().sum() == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("standardize postconditions on random matrices") {
    gmcs::Rng rng(5);
    Eigen::MatrixXd A(20, 30);
    Eigen::VectorXd y(20);
    for (int i = 0; i < 20; ++i) {
        y(i) = rng.gaussian();
        for (int j = 0; j < 30; ++j) A(i, j) = rng.gaussian();
    }
    const auto std_data = gmcs::standardize(Instance(A, y));
    for (int j = 0; j < 30; ++j) {
        CHECK(std::abs(std_data.data.A().col(j).mean()) <= 1e-12);
        CHECK(std_data.data.A().col(j).norm() == Catch::Approx(1.0).margin(1e-12));
    }
    CHECK(std::abs(std_data.data.y().mean()) <= 1e-12);
}

TEST_CASE("instance files survive a bitwise round trip") {
    const auto pi = gmcs::gen_planted({30, 0.5, 0.1, 0.05, 321});
    gmcs::InstanceFile file{pi.inst, pi.x0, pi.support0.ones(), pi.noise_var,
                            {{"seed", 321}}};
    TempFile f1("inst1.json"), f2("inst2.json");
    gmcs::save_instance(file, f1.path);
    const auto loaded = gmcs::load_instance(f1.path);
    CHECK(loaded.inst.A() == pi.inst.A());
    CHECK(loaded.inst.y() == pi.inst.y());
    REQUIRE(loaded.x0.has_value());
    CHECK(*loaded.x0 == pi.x0);
    gmcs::save_instance(loaded, f2.path);
    CHECK(f1.read() == f2.read());
}

TEST_CASE("planted instance keeps zero support energy through serialization") {
    const auto pi = gmcs::gen_planted({40, 0.5, 0.1, 0.0, 11});
    gmcs::InstanceFile file{pi.inst, pi.x0, pi.support0.ones(), 0.0, {}};
    TempFile f("inst3.json");
    gmcs::save_instance(file, f.path);
    const auto loaded = gmcs::load_instance(f.path);
    REQUIRE(loaded.support0.has_value());
    CHECK(gmcs::energy(loaded.inst, gmcs::SparseWeight(40, *loaded.support0)) <= 1e-20);
}

TEST_CASE("tampered shape fields are rejected") {
    const auto pi = gmcs::gen_planted({10, 0.5, 0.2, 0.0, 2});
    gmcs::InstanceFile file{pi.inst, std::nullopt, std::nullopt, std::nullopt, {}};
    TempFile f("tampered.json");
    gmcs::save_instance(file, f.path);
    auto text = f.read();
    const auto pos = text.find("\"M\": 5");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 6, "\"M\": 6");
    f.write(text);
    CHECK_THROWS_AS(gmcs::load_instance(f.path), gmcs::ShapeMismatch);
}

TEST_CASE("schema version is checked") {
    TempFile f("schema.json");
    f.write("{\"schema_version\": 99, \"M\": 1, \"N\": 1, \"A\": [1.0], \"y\": [1.0]}");
    CHECK_THROWS_AS(gmcs::load_instance(f.path), gmcs::SchemaVersionMismatch);
    TempFile g("garbage.json");
    g.write("not json");
    CHECK_THROWS_AS(gmcs::load_instance(g.path), gmcs::ParseError);
}
