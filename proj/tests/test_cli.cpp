#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"

using qflat::cli::kExitCriterionFailed;
using qflat::cli::kExitOk;
using qflat::cli::kExitUsage;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "qflat");
  std::ostringstream out;
  std::ostringstream err;
  const int code = qflat::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string tmp_path(const std::string& name) { return std::string(QFLAT_TEST_TMP) + "/" + name; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

}  // namespace

TEST_CASE("cli: usage errors exit with code 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"doubling", "--bogus"}).code == kExitUsage);
  CHECK(run({"doubling", "--M", "two"}).code == kExitUsage);
  CHECK(run({"doubling", "--M", "1.5"}).code == kExitUsage);
  CHECK(run({"converge-scalar", "--x", "1,0,0"}).code == kExitUsage);
  CHECK(run({"converge-scalar", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"converge-scalar", "--M", "1", "--x", "0.2,0,0,0"}).code == kExitUsage);
  CHECK(run({"npoint", "--signs", "-,*"}).code == kExitUsage);
  CHECK(run({"npoint", "--mode", "minkowski"}).code == kExitUsage);
  CHECK(run({"contour", "--kernel", "vector"}).code == kExitUsage);
  CHECK(run({"contour", "--coupling-l", "1", "--eps", "0.1", "--nodes", "8"}).code == kExitUsage);
  CHECK(run({"oracle", "--M", "2"}).code == kExitUsage);
  const Outcome help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("converge-scalar") != std::string::npos);
}

TEST_CASE("cli: doubling prints its CSV header and counts") {
  const Outcome o = run({"doubling", "--M", "2"});
  REQUIRE(o.code == kExitOk);
  CHECK(first_line(o.out) == "scheme,M,N,count");
  CHECK(o.out.find("central,2,2,16") != std::string::npos);
  CHECK(o.out.find("forward_backward,2,2,7") != std::string::npos);
}

TEST_CASE("cli: converge-scalar honours the threshold and reports the snapped site") {
  const Outcome pass = run({"converge-scalar", "--M", "2", "--threshold", "0.5"});
  CHECK(pass.code == kExitOk);
  CHECK(first_line(pass.out) ==
        "M,N,x0,x1,x2,x3,lattice_re,lattice_im,continuum_re,continuum_im,abs_err,rel_err");
  CHECK(pass.out.find("\n2,2,0.88622692545275") != std::string::npos);
  const Outcome fail = run({"converge-scalar", "--M", "2", "--threshold", "0.01"});
  CHECK(fail.code == kExitCriterionFailed);
  CHECK(fail.out == pass.out);
}

TEST_CASE("cli: JSON output has a stable schema") {
  const Outcome o = run({"converge-dirac", "--M", "1,2", "--format", "json", "--threshold", "10"});
  REQUIRE(o.code == kExitOk);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["command"] == "converge-dirac");
  CHECK(j["pass"] == true);
  CHECK(j["columns"].size() == 12);
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][1]["M"] == 2);
  CHECK(j["rows"][0].contains("rel_err"));
  REQUIRE(j["matrices"].size() == 2);
  CHECK(j["matrices"][0]["lattice"].size() == 16);
}

TEST_CASE("cli: config file overrides flags and rejects unknown keys") {
  const std::string cfg = tmp_path("cli_config.json");
  write_file(cfg, R"({"M": [1, 2], "format": "json", "threshold": 10})");
  const Outcome o = run({"converge-scalar", "--M", "4", "--config", cfg});
  REQUIRE(o.code == kExitOk);
  const auto j = nlohmann::json::parse(o.out);
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["M"] == 1);

  const std::string bad = tmp_path("cli_bad.json");
  write_file(bad, R"({"lattice_size": 3})");
  CHECK(run({"doubling", "--config", bad}).code == kExitUsage);
  write_file(bad, R"({"M": )");
  CHECK(run({"doubling", "--config", bad}).code == kExitUsage);
  write_file(bad, R"({"mass": "heavy"})");
  CHECK(run({"doubling", "--config", bad}).code == kExitUsage);
  CHECK(run({"doubling", "--config", tmp_path("missing.json")}).code == kExitUsage);
}

TEST_CASE("cli: --out writes the report to a file") {
  const std::string path = tmp_path("cli_out.csv");
  const Outcome o = run({"doubling", "--M", "2", "--out", path});
  CHECK(o.code == kExitOk);
  CHECK(o.out.empty());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "scheme,M,N,count");
}

TEST_CASE("cli: oracle passes on M=N=1 and detects a perturbed kernel") {
  const Outcome ok = run({"oracle", "--M", "1"});
  CHECK(ok.code == kExitOk);
  CHECK(first_line(ok.out) == "check,value,tolerance,pass");
  CHECK(ok.out.find(",false") == std::string::npos);
  const Outcome bad = run({"oracle", "--M", "1", "--perturb", "1e-3"});
  CHECK(bad.code == kExitCriterionFailed);
  CHECK(bad.out.find("scalar_accelerated_vs_direct") != std::string::npos);
}

TEST_CASE("cli: npoint reports analyticity violations with exit code 1") {
  const Outcome ok = run({"npoint"});
  CHECK(ok.code == kExitOk);
  CHECK(first_line(ok.out) == "mode,n,det_re,det_im,pn_abs,value_re,value_im");

  const double ell = 1.0 / (std::sqrt(2.0) * 3.141592653589793);
  const std::string half = std::to_string(0.5 * ell);
  const Outcome bad = run({"npoint", "--mode", "wightman", "--points", "0,0,0,0;0,0,0,0", "--eps", half});
  CHECK(bad.code == kExitCriterionFailed);
  CHECK(bad.err.find("imaginary gap") != std::string::npos);

  const Outcome far = run({"npoint", "--mode", "wightman", "--points", "0,0,0,0;0,0,0,0", "--eps",
                           std::to_string(3.0 * ell), "--spinors", "0,0"});
  CHECK(far.code == kExitOk);
}

TEST_CASE("cli: contour compares the shifted functionals against the tolerance") {
  const std::vector<std::string> base = {"contour", "--coupling-l", "1", "--nodes", "32", "--kernel", "rho"};
  auto with_threshold = [&](const char* t) {
    auto a = base;
    a.push_back("--threshold");
    a.push_back(t);
    return run(a);
  };
  const Outcome loose = with_threshold("1e-2");
  CHECK(loose.code == kExitOk);
  CHECK(first_line(loose.out) == "epsilon,value_re,value_im,rel_dev");
  const Outcome tight = with_threshold("1e-4");
  CHECK(tight.code == kExitCriterionFailed);
  CHECK(tight.out == loose.out);
}

TEST_CASE("cli: output is identical across runs and thread counts") {
  const std::vector<std::string> base = {"converge-dirac", "--M", "1,2", "--threshold", "10"};
  auto with_threads = [&](const char* t) {
    auto a = base;
    a.push_back("--threads");
    a.push_back(t);
    return run(a).out;
  };
  const std::string one = with_threads("1");
  CHECK(one == with_threads("1"));
  CHECK(one == with_threads("3"));
}
