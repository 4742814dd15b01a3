#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "strongdet/matrix_json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "strongdet");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = strongdet::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "strongdet-cli-tests";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

}  // namespace

TEST_CASE("simulate") {
    const auto path = scratch("traj.csv").string();
    REQUIRE(run_cli({"simulate", "--theory", "wentaculus", "--dim", "16", "--k", "2", "--seed", "3", "--out", path})
                .code == 0);
    const auto first = slurp(path);
    CHECK(std::count(first.begin(), first.end(), '\n') == 101);
    REQUIRE(run_cli({"simulate", "--theory", "wentaculus", "--dim", "16", "--k", "2", "--seed", "3", "--out", path,
                     "--threads", "4"})
                .code == 0);
    CHECK(slurp(path) == first);

    const auto manifest = strongdet::Json::parse(slurp(path + ".manifest.json"));
    CHECK(manifest.at("seed") == 3);
    CHECK(manifest.at("config_hash").get<std::string>().size() == 16);

    const auto missing = run_cli({"simulate", "--theory", "mentaculus", "--out", path});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("initial wave function") != std::string::npos);
    CHECK(run_cli({"simulate", "--theory", "mentaculus", "--sample-seed", "5", "--out", path}).code == 0);

    REQUIRE(run_cli({"simulate", "--hamiltonian", "zero", "--count", "10", "--out", path}).code == 0);
    std::istringstream rows(slurp(path));
    std::string line, entropy;
    std::getline(rows, line);
    while (std::getline(rows, line)) {
        const auto a = line.find(',');
        const auto e = line.substr(a + 1, line.find(',', a + 1) - a - 1);
        if (entropy.empty()) entropy = e;
        CHECK(e == entropy);
    }

    CHECK(run_cli({"simulate", "--k", "40", "--out", path}).code == 2);
    CHECK(run_cli({"simulate", "--config", scratch("absent.json").string()}).code == 2);
}

TEST_CASE("equivalence") {
    const auto path = scratch("eq.json").string();
    CHECK(run_cli({"equivalence", "--k", "4", "--dim", "8", "-M", "20000", "--seed", "7", "--out", path}).code == 0);
    const auto report = strongdet::Json::parse(slurp(path));
    CHECK(report.at("passed") == true);
    CHECK(report.contains("branch_weights"));

    CHECK(run_cli({"equivalence", "-M", "10", "--tolerance-multiplier", "0.1", "--out", path}).code == 1);

    REQUIRE(run_cli({"equivalence", "--k", "1", "-M", "100", "--out", path}).code == 0);
    const auto k1 = strongdet::Json::parse(slurp(path));
    CHECK(k1.at("branch_weights").at("max_abs_dev").get<double>() < 1e-9);
    for (const auto& row : k1.at("perObservable"))
        CHECK(std::abs(row.at("ensembleMean").get<double>() - row.at("wentaculusValue").get<double>()) < 1e-9);
}

TEST_CASE("mandelbrot") {
    const auto path = scratch("m.pgm").string();
    REQUIRE(run_cli({"mandelbrot", "--region", "-2", "1", "-1.25", "1.25", "--width", "64", "--height", "64",
                     "--max-iter", "256", "--out", path})
                .code == 0);
    const auto img = slurp(path);
    const std::string header = "P5\n64 64\n255\n";
    CHECK(img.size() == header.size() + 64 * 64);

    REQUIRE(run_cli({"mandelbrot", "--region", "-1.5", "-0.5", "-0.5", "0.5", "--width", "1", "--height", "1",
                     "--out", path})
                .code == 0);
    CHECK(static_cast<unsigned char>(slurp(path).back()) == 0);
    REQUIRE(run_cli({"mandelbrot", "--region", "0.5", "1.5", "-0.5", "0.5", "--width", "1", "--height", "1",
                     "--out", path})
                .code == 0);
    const auto v = static_cast<unsigned char>(slurp(path).back());
    CHECK(v > 0);
    CHECK(v < 16);

    CHECK(run_cli({"mandelbrot", "--region", "1", "1", "0", "1", "--out", path}).code == 2);
    CHECK(run_cli({"mandelbrot", "--variant", "cubic", "--out", path}).code == 2);
}

TEST_CASE("modal") {
    const auto worlds = scratch("worlds.json");
    const auto out = scratch("modal.json").string();
    write(worlds, R"({"times":[0,3],"worlds":[{"id":"x","trajectory":{"0":"x0","1":"x0","2":"x0","3":"x0"}}],"actual":"x"})");
    REQUIRE(run_cli({"modal", "--worlds", worlds.string(), "--out", out}).code == 0);
    auto j = strongdet::Json::parse(slurp(out));
    CHECK(j.at("determinism").at("holds") == true);
    CHECK(j.at("futuristic_determinism").at("holds") == true);
    CHECK(j.at("historical_determinism").at("holds") == true);
    CHECK(j.at("strong_determinism") == true);

    write(worlds, R"({"times":[0,1],"worlds":[{"id":"a","trajectory":{"0":"p","1":"q"}},
                    {"id":"b","trajectory":{"0":"r","1":"s"}}]})");
    REQUIRE(run_cli({"modal", "--worlds", worlds.string(), "--out", out}).code == 0);
    j = strongdet::Json::parse(slurp(out));
    CHECK(j.at("determinism").at("holds") == true);
    CHECK(j.at("strong_determinism") == false);

    write(worlds, R"({"times":[0,1],"worlds":[{"id":"a","trajectory":{"0":"p","1":"q"}},
                    {"id":"b","trajectory":{"0":"p","1":"s"}}]})");
    REQUIRE(run_cli({"modal", "--worlds", worlds.string(), "--out", out}).code == 0);
    j = strongdet::Json::parse(slurp(out));
    CHECK(j.at("determinism").at("holds") == false);
    CHECK(j.at("determinism").at("counterexample").at("t_agree") == 0);

    write(worlds, R"({"times":[0,1],"worlds":[{"id":"a"}]})");
    CHECK(run_cli({"modal", "--worlds", worlds.string()}).code == 2);
    write(worlds, "{not json");
    CHECK(run_cli({"modal", "--worlds", worlds.string()}).code == 2);
}

TEST_CASE("check") {
    for (const auto& suite : {"modal", "toyworlds", "laws"}) {
        const auto r = run_cli({"check", "--suite", suite, "--seed", "9"});
        CHECK(r.code == 0);
        CHECK(r.out == run_cli({"check", "--suite", suite, "--seed", "9"}).out);
    }
    CHECK(run_cli({"check", "--suite", "nonsense"}).code == 2);
}

TEST_CASE("usage errors") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"simulate", "--seed", "not-a-number"}).code == 2);
}
