#include "ldstat/cli.hpp"
#include "ldstat/gf.hpp"
#include "ldstat/ml.hpp"

#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ldstat;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run ldstat_run(std::vector<std::string> args) {
    args.insert(args.begin(), "ldstat");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("ldstat_cli_" + name)).string();
}

std::string write_file(const std::string& name, const std::string& body) {
    const std::string p = temp_path(name);
    std::ofstream(p) << body;
    return p;
}

double r12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

}  // namespace

TEST_CASE("sample is reproducible and parses back") {
    const auto a = ldstat_run({"sample", "--alpha", "2", "--rho", "0.8", "--size", "200", "--seed", "9"});
    const auto b = ldstat_run({"sample", "--alpha", "2", "--rho", "0.8", "--size", "200", "--seed", "9"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    std::istringstream in(a.out);
    const Sample s = read_sample(in);
    CHECK(s.size() == 200);
    Rng rng(9);
    const Sample direct = ld_sample(2.0, Fitness(0.8), 200, rng);
    CHECK(std::equal(s.counts().begin(), s.counts().end(), direct.counts().begin()));
    const auto zeros = ldstat_run({"sample", "--alpha", "0", "--rho", "1", "--size", "5"});
    CHECK(zeros.out == "0\n0\n0\n0\n0\n");
    CHECK(ldstat_run({"sample", "--alpha", "-1", "--rho", "1"}).code == cli::kInputError);
    CHECK(ldstat_run({"sample", "--alpha", "1", "--rho", "0"}).code == cli::kInputError);
}

TEST_CASE("fit gf agrees with the library") {
    const auto smp = ldstat_run({"sample", "--alpha", "2", "--rho", "0.8", "--size", "100", "--seed", "3"});
    const std::string path = write_file("fit.txt", smp.out);
    const auto r = ldstat_run({"fit", path, "--method", "gf"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    const GFFit lib = gf_fit(read_sample_file(path));
    CHECK(j["alpha_hat"].get<double>() == r12(lib.result.alpha_hat));
    CHECK(j["rho_hat"].get<double>() == r12(lib.result.rho_hat));
    CHECK(j["cov"].size() == 4);
    CHECK(j["cov"][1].get<double>() == j["cov"][2].get<double>());
    CHECK(j["method"] == "GF");
    CHECK(j["n"] == 100);
    CHECK(j.contains("warnings"));
    CHECK(j["ci_alpha"].size() == 2);
    CHECK(j["ci_rho"].size() == 2);
    CHECK(j["diagnostics"].contains("b"));
}

TEST_CASE("fit gf and ml cover the truth on a seeded LD(2, 0.8) file") {
    const auto smp = ldstat_run({"sample", "--alpha", "2", "--rho", "0.8", "--size", "100", "--seed", "12"});
    const std::string path = write_file("cover.txt", smp.out);
    for (const char* m : {"gf", "ml"}) {
        const auto r = ldstat_run({"fit", path, "--method", m});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["ci_alpha"][0].get<double>() <= 2.0);
        CHECK(j["ci_alpha"][1].get<double>() >= 2.0);
        CHECK(j["ci_rho"][0].get<double>() <= 0.8);
        CHECK(j["ci_rho"][1].get<double>() >= 0.8);
    }
}

TEST_CASE("fit options") {
    const auto smp = ldstat_run({"sample", "--alpha", "2", "--rho", "0.8", "--size", "100", "--seed", "4"});
    const std::string path = write_file("opts.txt", smp.out);
    const auto r = ldstat_run({"fit", path, "--test-rho1", "--total-cells", "2e8", "--level", "0.9"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.contains("p_value_rho1"));
    CHECK(j["mutation_probability"].get<double>() ==
          doctest::Approx(j["alpha_hat"].get<double>() / 2e8).epsilon(1e-11));
    const auto csv = ldstat_run({"fit", path, "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("method,n,converged,alpha_hat", 0) == 0);
    const auto p0 = ldstat_run({"fit", path, "--method", "p0"});
    REQUIRE(p0.code == 0);
    CHECK(json::parse(p0.out)["rho_hat"].is_null());
    const auto w = ldstat_run({"fit", path, "--method", "ml-winsor", "--winsor-bound", "5"});
    REQUIRE(w.code == 0);
    CHECK(json::parse(w.out)["method"] == "ML_WINSOR");
}

TEST_CASE("fit exit codes") {
    std::string body;
    for (int i = 0; i < 100; ++i) body += "0\n";
    const std::string zeros = write_file("zeros.txt", body);
    const auto r = ldstat_run({"fit", zeros, "--method", "gf"});
    CHECK(r.code == cli::kEstimationFailure);
    CHECK(r.err.find("p0") != std::string::npos);

    const std::string big = write_file("big.txt", "0\n3\n150000\n");
    const auto ml = ldstat_run({"fit", big, "--method", "ml"});
    CHECK(ml.code == cli::kEstimationFailure);
    CHECK(ml.err.find("GF") != std::string::npos);

    const std::string bad = write_file("bad.txt", "1\n2\nthree\n");
    const auto parse = ldstat_run({"fit", bad});
    CHECK(parse.code == cli::kInputError);
    CHECK(parse.err.find("line 3") != std::string::npos);
    CHECK(ldstat_run({"fit", temp_path("missing.txt")}).code == cli::kInputError);
    CHECK(ldstat_run({"fit", bad, "--method", "nope"}).code == cli::kInputError);
    CHECK(ldstat_run({"fit", bad, "--level", "abc"}).code == cli::kInputError);
    CHECK(ldstat_run({"frobnicate"}).code == cli::kInputError);
}

TEST_CASE("hist") {
    const std::string p = write_file("hist.txt", "0\n5\n500\n");
    const auto r = ldstat_run({"hist", p});
    REQUIRE(r.code == 0);
    CHECK(r.out == "class,lower,upper,count\nzero,0,0,1\n0,1e0,1e1,1\n1,1e1,1e2,0\n2,1e2,1e3,1\n");
}

TEST_CASE("hist of a large LD(50, 0.5) sample spans many decades") {
    const auto smp = ldstat_run({"sample", "--alpha", "50", "--rho", "0.5", "--size", "100000", "--seed", "1"});
    const std::string p = write_file("hist_big.txt", smp.out);
    const Sample s = read_sample_file(p);
    // quartiles of order 2e3, 7e3 and 3e4
    CHECK(s.quantile(0.25) > 500);
    CHECK(s.quantile(0.25) < 8000);
    CHECK(s.quantile(0.5) > 2000);
    CHECK(s.quantile(0.5) < 25000);
    CHECK(s.quantile(0.75) > 8000);
    CHECK(s.quantile(0.75) < 120000);
    const auto r = ldstat_run({"hist", p});
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    // header, zero row, classes 0..max class
    CHECK(rows - 2 >= 12);
}

TEST_CASE("mse") {
    const auto r = ldstat_run({"mse", "--alpha", "1", "--rho", "1,0.5", "--replicates", "20", "--methods", "gf,p0", "--seed", "3"});
    REQUIRE(r.code == 0);
    const auto again = ldstat_run({"mse", "--alpha", "1", "--rho", "1,0.5", "--replicates", "20", "--methods", "gf,p0", "--seed", "3"});
    CHECK(r.out == again.out);
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 5);
    CHECK(ldstat_run({"mse", "--replicates", "0"}).code == cli::kInputError);
}

TEST_CASE("simulate") {
    const std::string out = temp_path("sim_counts.txt");
    const std::string summary = temp_path("sim_summary.json");
    const auto zero = ldstat_run({"simulate", "--law", "exponential", "--p", "0", "--n0", "5", "--t-end", "3",
                                  "--replicates", "10", "-o", out, "--summary", summary});
    REQUIRE(zero.code == 0);
    std::ifstream counts(out);
    for (std::string l; std::getline(counts, l);) CHECK(l == "0");
    const auto cal = ldstat_run({"simulate", "--law", "exponential", "--alpha", "2", "--mu", "1", "--n0", "20",
                                 "--t-end", "3", "--replicates", "200", "--tv", "-o", out, "--summary", summary});
    REQUIRE(cal.code == 0);
    std::ifstream sj(summary);
    const json j = json::parse(sj);
    CHECK(j["alpha"].get<double>() == 2.0);
    CHECK(j["rho"].get<double>() == doctest::Approx(1.0));
    CHECK(j.contains("tv_distance"));
    CHECK(ldstat_run({"simulate", "--law", "weibull"}).code == cli::kInputError);
    CHECK(ldstat_run({"simulate", "--p", "0.1", "--alpha", "2"}).code == cli::kInputError);
}

TEST_CASE("simulate reports the Harris constant for lattice growth") {
    const std::string out = temp_path("sim_det.txt");
    const std::string summary = temp_path("sim_det.json");
    const auto r = ldstat_run({"simulate", "--law", "deterministic", "--T", "1", "--p", "0", "--n0", "1", "--t-end", "10",
                               "--replicates", "2000", "--random-phase", "-o", out, "--summary", summary});
    REQUIRE(r.code == 0);
    std::ifstream sj(summary);
    const json j = json::parse(sj);
    const double c = 1.0 / (2.0 * std::log(2.0));
    CHECK(std::fabs(j["mean_population_ratio"].get<double>() - c) < 0.03 * c);
}
