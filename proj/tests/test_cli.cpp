#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "lse/harness.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::initializer_list<std::string> args) {
    std::vector<std::string> store{"lse"};
    store.insert(store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : store) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = lse::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

const fs::path kTmp = fs::path(LSE_TEST_TMPDIR) / "cli_tmp";

}  // namespace

TEST_CASE("cli: usage errors") {
    CHECK(run_cli({}).code == lse::cli::kBadInput);
    CHECK(run_cli({"bogus"}).code == lse::cli::kBadInput);
    CHECK(run_cli({"--help"}).code == lse::cli::kOk);
    CHECK(run_cli({"eval", "--x=1,abc"}).code == lse::cli::kBadInput);
    CHECK(run_cli({"eval"}).code == lse::cli::kBadInput);
    CHECK(run_cli({"eval", "--x=1", "--format", "fp8"}).code == lse::cli::kBadInput);
    CHECK(run_cli({"eval", "--x=1", "--alg", "fast"}).code == lse::cli::kBadInput);
    CHECK(run_cli({"eval", "--x=1", "--csv", "a.csv"}).code == lse::cli::kBadInput);
    const auto r = run_cli({"eval", "--x=1,2,x"});
    CHECK(r.err.find("line 1, field 3") != std::string::npos);
}

TEST_CASE("cli: eval") {
    const auto r = run_cli({"eval", "--x=1,2,3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("y: 3.40760596") != std::string::npos);

    const auto j = run_cli({"eval", "--alg", "basic", "--format", "fp16", "--x=12,0", "--json"});
    CHECK(j.code == 0);
    const auto obj = nlohmann::json::parse(j.out);
    CHECK(obj["y"] == "inf");
    CHECK(obj["flags"][0] == "overflowed");
    CHECK(obj["format"] == "fp16");

    const auto s = nlohmann::json::parse(run_cli({"eval", "--format", "fp16", "--x=12,0", "--json"}).out);
    CHECK(s["y"] == 12.0);
    CHECK(s["flags"].empty());
}

TEST_CASE("cli: analyze") {
    const auto r = run_cli({"analyze", "--x=1,-1", "--json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["cond_f"].get<double>() == doctest::Approx(0.88736812839934598));
    const auto text = run_cli({"analyze", "--x=-1.3862943611198906,-1.3862943611198906,-1.3862943611198906,-1.3862943611198906"});
    CHECK(text.code == 0);
    CHECK(text.out.find("inf") != std::string::npos);
}

TEST_CASE("cli: formats") {
    const auto r = run_cli({"formats"});
    CHECK(r.code == 0);
    CHECK(r.out.find("-9.70") != std::string::npos);
    CHECK(r.out.find("6.55e+04") != std::string::npos);
    const auto j = nlohmann::json::parse(run_cli({"formats", "--json"}).out);
    CHECK(j.size() == 4);
    CHECK(j[1]["format"] == "fp16");
    CHECK(j[1]["rmax"] == 65504.0);
}

TEST_CASE("cli: experiment writes records, summary and plots") {
    fs::create_directories(kTmp);
    const auto prefix = (kTmp / "exp").string();
    const auto r = run_cli({"experiment", "--gen", "uniform:-20,20", "--count", "200", "--seed", "4", "--out",
                            prefix, "--svg", "--threads", "2"});
    CHECK(r.code == 0);
    const auto recs = slurp(prefix + ".csv");
    CHECK(recs.rfind(std::string(lse::kRecordsHeader) + "\n", 0) == 0);
    CHECK(slurp(prefix + "_summary.csv").rfind("statistic,value\n", 0) == 0);
    std::size_t svgs = 0;
    for (const auto& e : fs::directory_iterator(kTmp)) svgs += e.path().extension() == ".svg";
    CHECK(svgs == 10);

    // LSE_THREADS changes nothing in the output.
    ::setenv("LSE_THREADS", "3", 1);
    const auto prefix2 = (kTmp / "exp2").string();
    CHECK(run_cli({"experiment", "--gen", "uniform:-20,20", "--count", "200", "--seed", "4", "--out", prefix2})
              .code == 0);
    CHECK(slurp(prefix2 + ".csv") == recs);
    ::setenv("LSE_THREADS", "zero", 1);
    CHECK(run_cli({"experiment", "--gen", "uniform:-20,20", "--count", "5", "--out", prefix2}).code ==
          lse::cli::kBadInput);
    ::unsetenv("LSE_THREADS");

    CHECK(run_cli({"experiment", "--gen", "uniform:-20,20", "--format", "fp64", "--out", prefix2}).code ==
          lse::cli::kBadInput);
    CHECK(run_cli({"experiment", "--csv", (kTmp / "missing.csv").string(), "--out", prefix2}).code ==
          lse::cli::kBadInput);
    fs::remove_all(kTmp);
}
