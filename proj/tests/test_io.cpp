#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "wassproj/csv.hpp"
#include "wassproj/datagen.hpp"
#include "wassproj/errors.hpp"
#include "wassproj/model_io.hpp"
#include "wassproj/projected_pca.hpp"
#include "wassproj/projected_regression.hpp"

using namespace wassproj;

namespace {

class TempFile {
public:
    explicit TempFile(const std::string& name)
        : path_((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }
    void write(const std::string& text) const {
        std::ofstream out(path_);
        out << text;
    }
    std::string read() const {
        std::ifstream in(path_);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        return text;
    }

private:
    std::string path_;
};

std::vector<QuantileSpline> random_splines(const SplineBasis& basis, int n,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<QuantileSpline> out;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd c(basis.J);
        double acc = -1.0 + unif(rng);
        for (int j = 0; j < basis.J; ++j) {
            acc += unif(rng);
            c(j) = acc;
        }
        out.push_back({basis, c});
    }
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("doubles survive the 17-digit text format") {
    const double values[] = {0.1,    1.0 / 3.0, 3.141592653589793, -1e300,
                             1e-300, 5e-324,    0.0,               -2.5000000000000004};
    for (double v : values) {
        const std::string text = format_double(v);
        double back = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), back);
        CHECK(ec == std::errc{});
        CHECK(ptr == text.data() + text.size());
        CHECK(back == v);
    }
}

TEST_CASE("sample distribution files group rows by first appearance") {
    TempFile f("wassproj_io_samples.csv");
    f.write(
        "dist_id,value\n"
        "b,3.5\n"
        "a,1.0\n"
        "b,-2.0\n"
        "\n"
        "a,0.25\n"
        "b,0.0\n");
    auto dists = read_distributions_csv(f.path());
    REQUIRE(dists.size() == 2);
    CHECK(dists[0].id == "b");
    CHECK(dists[1].id == "a");
    CHECK(dists[0].dist.samples() == std::vector<double>{-2.0, 0.0, 3.5});
    CHECK(dists[1].dist.samples() == std::vector<double>{0.25, 1.0});

    // Writing and re-reading preserves ids, order, and values exactly.
    TempFile g("wassproj_io_samples_rt.csv");
    write_distributions_csv(g.path(), dists);
    auto back = read_distributions_csv(g.path());
    REQUIRE(back.size() == 2);
    CHECK(back[0].id == "b");
    CHECK(back[0].dist.samples() == dists[0].dist.samples());
    CHECK(back[1].dist.samples() == dists[1].dist.samples());
}

TEST_CASE("histogram distribution files require contiguous bins") {
    TempFile f("wassproj_io_hist.csv");
    f.write(
        "dist_id,edge_lo,edge_hi,mass\n"
        "h,0.0,0.5,0.25\n"
        "h,0.5,1.0,0.75\n");
    auto dists = read_distributions_csv(f.path());
    REQUIRE(dists.size() == 1);
    CHECK(dists[0].dist.is_histogram());
    CHECK(dists[0].dist.edges() == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(dists[0].dist.masses() == std::vector<double>{0.25, 0.75});

    TempFile rt("wassproj_io_hist_rt.csv");
    write_distributions_csv(rt.path(), dists);
    auto back = read_distributions_csv(rt.path());
    REQUIRE(back.size() == 1);
    CHECK(back[0].dist.edges() == dists[0].dist.edges());
    CHECK(back[0].dist.masses() == dists[0].dist.masses());

    // Mixed layouts cannot share a file.
    std::vector<NamedDistribution> mixed = dists;
    mixed.push_back({"s", EmpiricalDistribution::from_samples({1.0, 2.0})});
    CHECK_THROWS_AS(write_distributions_csv(rt.path(), mixed), std::invalid_argument);

    f.write(
        "dist_id,edge_lo,edge_hi,mass\n"
        "h,0.0,0.5,0.25\n"
        "h,0.6,1.0,0.75\n");
    try {
        read_distributions_csv(f.path());
        FAIL("expected CsvParseError");
    } catch (const CsvParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("malformed distribution files report the offending line") {
    TempFile f("wassproj_io_bad.csv");

    f.write("wrong,header\n");
    CHECK_THROWS_AS(read_distributions_csv(f.path()), CsvParseError);

    f.write("");
    CHECK_THROWS_AS(read_distributions_csv(f.path()), CsvParseError);

    // A valid header with no rows is an empty dataset, not an error.
    f.write("dist_id,value\n");
    CHECK(read_distributions_csv(f.path()).empty());

    f.write("dist_id,value\na,1.0\nb,oops\n");
    try {
        read_distributions_csv(f.path());
        FAIL("expected CsvParseError");
    } catch (const CsvParseError& e) {
        CHECK(e.line() == 3);
    }

    f.write("dist_id,value\na,1.0,9\n");
    try {
        read_distributions_csv(f.path());
        FAIL("expected CsvParseError");
    } catch (const CsvParseError& e) {
        CHECK(e.line() == 2);
    }

    CHECK_THROWS_AS(read_distributions_csv("/no/such/dir/file.csv"), std::runtime_error);
}

TEST_CASE("coefficient tables round-trip bit for bit") {
    CoefficientTable table;
    table.ids = {"first", "second", "third"};
    table.w2_errors = Eigen::Vector3d(0.1, 1.0 / 3.0, 5e-324);
    table.coeffs.resize(3, 4);
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) table.coeffs(i, j) = std::exp(gauss(rng) * 10.0);
    table.coeffs(2, 3) = -1e300;

    TempFile f("wassproj_io_coeffs.csv");
    write_coefficients_csv(f.path(), table);
    CoefficientTable back = read_coefficients_csv(f.path());
    CHECK(back.ids == table.ids);
    CHECK(back.w2_errors == table.w2_errors);
    CHECK(back.coeffs == table.coeffs);

    TempFile g("wassproj_io_coeffs_bad.csv");
    g.write("dist_id,w2_error,a1,b2\nx,0,1,2\n");
    CHECK_THROWS_AS(read_coefficients_csv(g.path()), CsvParseError);
    g.write("dist_id,w2_error\nx,0\n");
    CHECK_THROWS_AS(read_coefficients_csv(g.path()), CsvParseError);

    g.write("dist_id,w2_error,a1,a2,a3\n");
    CoefficientTable empty = read_coefficients_csv(g.path());
    CHECK(empty.ids.empty());
    CHECK(empty.coeffs.rows() == 0);
    CHECK(empty.coeffs.cols() == 3);
}

TEST_CASE("matrix tables support optional row labels") {
    Eigen::MatrixXd m(2, 3);
    m << 1, 2, 3, 4, 5, 6;
    TempFile f("wassproj_io_matrix.csv");

    write_matrix_csv(f.path(), m, {"x", "y", "z"});
    CHECK(f.read() == "x,y,z\n1,2,3\n4,5,6\n");

    write_matrix_csv(f.path(), m, {"x", "y", "z"}, {"r1", "r2"}, "name");
    CHECK(f.read() == "name,x,y,z\nr1,1,2,3\nr2,4,5,6\n");

    CHECK_THROWS_AS(write_matrix_csv(f.path(), m, {"x", "y"}), std::invalid_argument);
    CHECK_THROWS_AS(write_matrix_csv(f.path(), m, {"x", "y", "z"}, {"r1"}),
                    std::invalid_argument);
}

TEST_CASE("pca models round-trip through JSON exactly") {
    SplineBasis basis = make_basis(6);
    auto data = random_splines(basis, 8, 12);
    PcaModel model = fit_pca(data);

    const std::string text = serialize_pca_model(model);
    PcaModel back = deserialize_pca_model(text);
    CHECK(back.basis.J == model.basis.J);
    CHECK(back.method == model.method);
    CHECK(back.center == model.center);
    CHECK(back.directions == model.directions);
    CHECK(back.eigenvalues == model.eigenvalues);
    CHECK(back.E == model.E);
    CHECK(back.G == model.G);

    TempFile f("wassproj_io_pca.json");
    save_pca_model(f.path(), model);
    PcaModel loaded = load_pca_model(f.path());
    CHECK(loaded.directions == model.directions);

    CHECK_THROWS_AS(deserialize_regression_model(text), std::runtime_error);
    CHECK_THROWS_AS(deserialize_pca_model("{ not json"), std::runtime_error);
    CHECK_THROWS_AS(deserialize_pca_model("{\"type\":\"pca_model\"}"), std::runtime_error);

    // Tamper with the declared basis size: shapes no longer match.
    std::string bad = text;
    const std::string key = "\"basis_size\": 6";
    bad.replace(bad.find(key), key.size(), "\"basis_size\": 7");
    CHECK_THROWS_AS(deserialize_pca_model(bad), std::runtime_error);
}

TEST_CASE("regression models round-trip through JSON exactly") {
    SplineBasis basis = make_basis(5);
    auto Z1 = random_splines(basis, 9, 21);
    auto Z2 = random_splines(basis, 9, 22);
    auto Y = random_splines(basis, 9, 23);

    for (bool intercept : {true, false}) {
        RegressionModel model = fit_regression({Z1, Z2}, Y, 0.05, intercept);
        const std::string text = serialize_regression_model(model);
        RegressionModel back = deserialize_regression_model(text);
        CHECK(back.basis.J == model.basis.J);
        CHECK(back.rho == model.rho);
        CHECK(back.intercept == model.intercept);
        CHECK(back.theta_alpha == model.theta_alpha);
        REQUIRE(back.thetas.size() == model.thetas.size());
        for (std::size_t k = 0; k < model.thetas.size(); ++k)
            CHECK(back.thetas[k] == model.thetas[k]);
        REQUIRE(back.z_means.size() == model.z_means.size());
        for (std::size_t k = 0; k < model.z_means.size(); ++k)
            CHECK(back.z_means[k] == model.z_means[k]);
        CHECK(back.y_mean == model.y_mean);
        CHECK(back.E == model.E);

        // The reloaded model predicts identically.
        QuantileSpline p1 = predict(model, {Z1[0], Z2[0]});
        QuantileSpline p2 = predict(back, {Z1[0], Z2[0]});
        CHECK(p1.coeffs == p2.coeffs);
    }

    RegressionModel model = fit_regression({Z1}, Y, 0.05, true);
    TempFile f("wassproj_io_reg.json");
    save_regression_model(f.path(), model);
    RegressionModel loaded = load_regression_model(f.path());
    CHECK(loaded.thetas[0] == model.thetas[0]);
    CHECK_THROWS_AS(deserialize_pca_model(serialize_regression_model(model)),
                    std::runtime_error);
    CHECK_THROWS_AS(load_regression_model("/no/such/dir/model.json"), std::runtime_error);
}

TEST_SUITE_END();
