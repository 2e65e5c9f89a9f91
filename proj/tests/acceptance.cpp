// Acceptance suite: runs every library-level guarantee end to end and prints
// one pass/fail line per criterion. Exits 0 only if all criteria pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "otmix/otmix.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

bool g_all_passed = true;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int index, const std::string& name, bool passed, const std::string& detail) {
    g_all_passed = g_all_passed && passed;
    std::printf("[%s] criterion %2d %-28s %s\n", passed ? "PASS" : "FAIL", index,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string residual_summary(const std::vector<otmix::CheckRecord>& records) {
    std::ostringstream out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (i > 0) out << "; ";
        out << records[i].name << " " << records[i].max_residual << " <= "
            << records[i].tolerance;
    }
    return out.str();
}

bool all_passed(const std::vector<otmix::CheckRecord>& records) {
    for (const auto& r : records)
        if (!r.passed) return false;
    return true;
}

int run_cli(const std::string& args) {
    const std::string command =
        std::string(OTMIX_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(command.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void criterion_identity() {
    const auto start = Clock::now();
    const auto records = otmix::check_identity_nll(0, 200);
    const double elapsed = seconds_since(start);
    const bool ok = all_passed(records) && elapsed <= 10.0;
    std::ostringstream detail;
    detail << residual_summary(records) << "; " << elapsed << "s <= 10s";
    report(1, "nll_transport_identity", ok, detail.str());
}

void criterion_upper_bound() {
    const auto records = otmix::check_upper_bound(0, 200);
    report(2, "entropic_upper_bound", all_passed(records), residual_summary(records));
}

void criterion_min_over_pi() {
    const auto records = otmix::check_min_over_pi_equality(0, 50);
    report(3, "weight_minimized_equality", all_passed(records),
           residual_summary(records));
}

void criterion_variational_identities() {
    const auto records = otmix::check_variational_identities(0, 500);
    std::vector<otmix::CheckRecord> gibbs, decomposition;
    for (const auto& r : records) {
        if (r.name.rfind("gibbs", 0) == 0) gibbs.push_back(r);
        if (r.name.rfind("kl_decomposition", 0) == 0) decomposition.push_back(r);
    }
    report(4, "variational_principle", all_passed(gibbs), residual_summary(gibbs));
    report(5, "kl_decomposition", all_passed(decomposition),
           residual_summary(decomposition));
}

void criterion_em_equivalence() {
    const auto records = otmix::check_em_equivalence(0, 50);
    report(6, "em_equals_bcd", all_passed(records), residual_summary(records));
}

struct EstimationOutcome {
    bool ok;
    std::string detail;
    std::vector<double> trajectory;
};

EstimationOutcome criterion_estimation() {
    const auto start = Clock::now();
    Eigen::MatrixXd means(2, 2);
    means << -5.0, 0.0, 5.0, 0.0;
    Eigen::VectorXd weights(2);
    weights << 0.4, 0.6;
    const otmix::GmmParams truth(means, Eigen::MatrixXd::Identity(2, 2),
                                 otmix::ProbabilityVector(weights));
    const otmix::Dataset data = otmix::sample_gmm(truth, 2000, 2026);
    otmix::FitSettings settings;
    settings.seed = 4;
    const otmix::FitReport fit = otmix::fit(data, 2, settings);
    const double elapsed = seconds_since(start);

    // Match components up to permutation by the first mean coordinate.
    const auto& fitted = fit.final_params;
    const bool swapped = fitted.means()(0, 0) > fitted.means()(1, 0);
    const int lo = swapped ? 1 : 0;
    const int hi = swapped ? 0 : 1;
    const double mean_err = std::max(
        (fitted.means().row(lo).transpose() - truth.mean(0)).cwiseAbs().maxCoeff(),
        (fitted.means().row(hi).transpose() - truth.mean(1)).cwiseAbs().maxCoeff());
    const double weight_err =
        std::max(std::abs(fitted.weights()[lo] - 0.4), std::abs(fitted.weights()[hi] - 0.6));
    const double sigma_err =
        (fitted.covariance() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff();

    const bool ok = fit.converged && mean_err <= 0.2 && weight_err <= 0.05 &&
                    sigma_err <= 0.15 && elapsed <= 5.0;
    std::ostringstream detail;
    detail << "mean_err " << mean_err << " <= 0.2; weight_err " << weight_err
           << " <= 0.05; sigma_err " << sigma_err << " <= 0.15; " << elapsed
           << "s <= 5s";
    return EstimationOutcome{ok, detail.str(), fit.nll_trajectory};
}

void criterion_monotonicity(const std::vector<double>& estimation_trajectory) {
    const auto records = otmix::check_monotonicity(0, 50);
    double max_increase = records[0].max_residual;
    for (std::size_t s = 1; s < estimation_trajectory.size(); ++s)
        max_increase = std::max(max_increase, estimation_trajectory[s] -
                                                  estimation_trajectory[s - 1]);
    const bool ok = all_passed(records) && max_increase <= 1e-9;
    std::ostringstream detail;
    detail << "max increase " << max_increase << " <= 1e-09 (50 fits + estimation fit)";
    report(7, "nll_monotonicity", ok, detail.str());
}

void criterion_stationarity() {
    const auto records = otmix::check_mstep_stationarity(0, 50);
    report(8, "mstep_stationarity", all_passed(records), residual_summary(records));
}

void criterion_determinism() {
    const fs::path dir =
        fs::temp_directory_path() / ("otmix_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    bool ok = true;
    std::string detail;
    try {
        Eigen::MatrixXd means(2, 1);
        means << -2.0, 2.0;
        Eigen::VectorXd weights(2);
        weights << 0.5, 0.5;
        const otmix::GmmParams model(means, Eigen::MatrixXd::Identity(1, 1),
                                     otmix::ProbabilityVector(weights));
        const fs::path model_path = dir / "model.txt";
        otmix::write_model(model, model_path);

        const auto twice_identical = [&](const std::string& args, const fs::path& out_a,
                                         const fs::path& out_b,
                                         const std::string& out_flag) {
            if (run_cli(args + " " + out_flag + " " + out_a.string()) != 0) return false;
            if (run_cli(args + " " + out_flag + " " + out_b.string()) != 0) return false;
            return read_bytes(out_a) == read_bytes(out_b);
        };

        const bool sample_ok = twice_identical(
            "sample --model " + model_path.string() + " --n 200 --seed 5",
            dir / "s1.csv", dir / "s2.csv", "--out");
        ok = ok && sample_ok;
        detail += std::string("sample ") + (sample_ok ? "identical" : "DIFFERS");

        const fs::path data = dir / "s1.csv";
        const std::string fit_base = "fit --data " + data.string() +
                                     " --k 2 --seed 4 --out-report " +
                                     (dir / "fr.txt").string();
        const bool fit_ok = twice_identical(fit_base, dir / "m1.txt", dir / "m2.txt",
                                            "--out-model");
        ok = ok && fit_ok;
        detail += std::string("; fit ") + (fit_ok ? "identical" : "DIFFERS");

        const bool verify_ok = twice_identical("verify --seed 6 --trials 3",
                                               dir / "v1.txt", dir / "v2.txt", "--out");
        ok = ok && verify_ok;
        detail += std::string("; verify ") + (verify_ok ? "identical" : "DIFFERS");
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    fs::remove_all(dir);
    report(10, "cli_determinism", ok, detail);
}

}  // namespace

int main() {
    try {
        criterion_identity();
        criterion_upper_bound();
        criterion_min_over_pi();
        criterion_variational_identities();
        criterion_em_equivalence();
        const EstimationOutcome estimation = criterion_estimation();
        criterion_monotonicity(estimation.trajectory);
        criterion_stationarity();
        report(9, "estimation_sanity", estimation.ok, estimation.detail);
        criterion_determinism();
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance suite aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%s\n", g_all_passed ? "all criteria passed" : "CRITERIA FAILED");
    return g_all_passed ? 0 : 1;
}
