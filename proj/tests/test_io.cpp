#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "otmix/io.hpp"

using namespace otmix;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("otmix_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

GmmParams example_params() {
    Eigen::MatrixXd means(2, 2);
    means << -5.0, 0.1, 5.0, -0.3;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.25, 0.4, 0.4, 0.9;
    Eigen::VectorXd w(2);
    w << 0.4, 0.6;
    return GmmParams(means, sigma, ProbabilityVector(w));
}

}  // namespace

TEST_CASE("dataset parsing", "[io]") {
    TempDir dir;
    const fs::path file = dir.path / "data.csv";

    write_text(file, "x1\n0.5\n-1.25\n");
    const Dataset plain = read_dataset(file);
    CHECK(plain.size() == 2);
    CHECK(plain.dimension() == 1);
    CHECK_FALSE(plain.labels().has_value());
    CHECK(plain.points()(1, 0) == -1.25);

    write_text(file, "x1,label\n0.5,1\n-1.25,2\n");
    const Dataset labeled = read_dataset(file);
    REQUIRE(labeled.labels().has_value());
    CHECK((*labeled.labels())[0] == 1);
    CHECK((*labeled.labels())[1] == 2);

    write_text(file, "x1,x2\n0.5,oops\n");
    try {
        read_dataset(file);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("column 2") != std::string::npos);
    }

    write_text(file, "x1,x2\n0.5\n");
    CHECK_THROWS_AS(read_dataset(file), RaggedRow);

    write_text(file, "x1,x2\n");
    CHECK_THROWS_AS(read_dataset(file), ParseError);
}

TEST_CASE("dataset round trip", "[io]") {
    TempDir dir;
    const fs::path file = dir.path / "roundtrip.csv";
    Eigen::MatrixXd points(3, 2);
    points << 0.1, -2.0 / 3.0, 1e-17, 123456.789, -0.0625, 3.0;
    const Dataset data(points, std::vector<int>{1, 3, 2});
    write_dataset(data, file);
    const Dataset back = read_dataset(file);
    CHECK((back.points() - points).cwiseAbs().maxCoeff() == 0.0);
    CHECK(*back.labels() == *data.labels());

    // Canonical formatting: a second write is byte-identical.
    const std::string first = read_text(file);
    write_dataset(back, file);
    CHECK(read_text(file) == first);
}

TEST_CASE("model round trip", "[io]") {
    TempDir dir;
    const fs::path file = dir.path / "model.txt";
    const GmmParams params = example_params();
    write_model(params, file);
    const GmmParams back = read_model(file);
    CHECK((back.means() - params.means()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.covariance() - params.covariance()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.weights().weights() - params.weights().weights()).cwiseAbs().maxCoeff() ==
          0.0);

    const std::string first = read_text(file);
    write_model(back, file);
    CHECK(read_text(file) == first);
}

TEST_CASE("model document validation", "[io]") {
    TempDir dir;
    const fs::path file = dir.path / "model.txt";

    write_text(file,
               "otmix-model\nschema_version 2\ncomponents 1\ndimension 1\n"
               "weights 1\nmean 1 0\ncovariance_row 1 1\n");
    CHECK_THROWS_AS(read_model(file), SchemaVersionMismatch);

    // Hand-edited asymmetric covariance.
    write_text(file,
               "otmix-model\nschema_version 1\ncomponents 1\ndimension 2\n"
               "weights 1\nmean 1 0 0\n"
               "covariance_row 1 1 0.5\ncovariance_row 2 0.1 1\n");
    CHECK_THROWS_AS(read_model(file), InvariantViolation);

    // Weights off the simplex.
    write_text(file,
               "otmix-model\nschema_version 1\ncomponents 2\ndimension 1\n"
               "weights 0.9 0.3\nmean 1 0\nmean 2 1\ncovariance_row 1 1\n");
    CHECK_THROWS_AS(read_model(file), InvariantViolation);

    write_text(file, "not a model\n");
    CHECK_THROWS_AS(read_model(file), ParseError);

    write_text(file,
               "otmix-model\nschema_version 1\ncomponents 1\ndimension 1\n"
               "weights 1\nmean 1 zero\ncovariance_row 1 1\n");
    CHECK_THROWS_AS(read_model(file), ParseError);
}

TEST_CASE("report documents are deterministic", "[io]") {
    TempDir dir;
    const fs::path fit_file = dir.path / "fit_report.txt";
    const FitReport report{example_params(),
                           {10.5, 9.25, 9.2},
                           {10.6, 9.3, 9.21},
                           3,
                           true,
                           TerminationReason::Tolerance};
    write_fit_report(report, fit_file);
    const std::string first = read_text(fit_file);
    CHECK(first.find("sweeps_used 3") != std::string::npos);
    CHECK(first.find("termination_reason tolerance") != std::string::npos);
    CHECK(first.find("sweep 2 nll 9.25") != std::string::npos);
    write_fit_report(report, fit_file);
    CHECK(read_text(fit_file) == first);

    const fs::path verify_file = dir.path / "verification.txt";
    VerificationReport verification{7, 3, {}};
    verification.checks.push_back(make_record("beta", 3, 1e-12, 1e-8));
    verification.checks.push_back(make_record("alpha", 3, 2e-6, 1e-7));
    write_verification_report(verification, verify_file);
    const std::string text = read_text(verify_file);
    CHECK(text.find("check beta") != std::string::npos);
    CHECK(text.find("passed false") != std::string::npos);
    CHECK(text.find("overall_passed false") != std::string::npos);
    write_verification_report(verification, verify_file);
    CHECK(read_text(verify_file) == text);
}
