#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stwave/io.hpp"
#include "stwave/noise.hpp"

using namespace stwave;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "stwave_test_cli";

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    fs::create_directories(kDir);
    const fs::path log = kDir / "stdout.txt";
    const std::string cmd = std::string(STWAVE_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string path(const char* name) { return (kDir / name).string(); }

double max_abs_diff(const SpaceTimeVolume& a, const SpaceTimeVolume& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(run("").code == 2);
    CHECK(run("denoise --output x.stv").code == 2);
    CHECK(run("denoise --input a --output b --method median").code == 2);
}

TEST_CASE("denoise") {
    fs::create_directories(kDir);
    SpaceTimeVolume truth(Shape{2, 32, 16});
    for (std::size_t i = 0; i < truth.data().size(); ++i) truth.data()[i] = std::sin(0.01 * static_cast<double>(i));
    const SpaceTimeVolume noisy = observe_volume(truth, 0.4, 5);
    write_volume(noisy, path("noisy.stv"));

    SUBCASE("linear at sigma 0 reproduces the input") {
        const Run r = run("denoise --input " + path("noisy.stv") + " --output " + path("lin.stv") +
                          " --method linear --sigma 0");
        REQUIRE(r.code == 0);
        CHECK(max_abs_diff(read_volume(path("lin.stv")), noisy) < 1e-10);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["method"] == "linear");
        CHECK(j["sigma"] == 0.0);
    }
    SUBCASE("auto sigma") {
        const Run r = run("denoise --input " + path("noisy.stv") + " --output " + path("auto.stv") +
                          " --method block --sigma auto --wavelet haar --delta 1.5 --practical");
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["sigma_source"] == "mad");
        CHECK(j["sigma"].get<double>() == doctest::Approx(0.4).epsilon(0.1));
        CHECK(j["block_length"].get<int>() >= 1);
        CHECK(fs::exists(path("auto.stv")));
    }
    SUBCASE("theoretical delta floor is enforced") {
        CHECK(run("denoise --input " + path("noisy.stv") + " --output " + path("x.stv") + " --sigma 0.4 --delta 3")
                  .code == 2);
    }
    SUBCASE("file errors exit with 3") {
        std::ofstream(path("junk.stv")) << "this is not a volume file at all";
        const Run r = run("denoise --input " + path("junk.stv") + " --output " + path("y.stv") + " --sigma 1");
        CHECK(r.code == 3);
        CHECK(r.out.find("format") != std::string::npos);
        CHECK(run("denoise --input " + path("absent.stv") + " --output " + path("y.stv")).code == 3);
    }
}

TEST_CASE("simulate writes rows and a sidecar") {
    const Run r = run("simulate --N 32 --n 16 --M 2 --snr 5 --snr 3 --out " + path("study.csv"));
    REQUIRE(r.code == 0);
    const auto rows = read_results_csv(path("study.csv"));
    CHECK(rows.size() == 2 * 2 * 3);
    const auto meta = nlohmann::json::parse(std::ifstream(path("study.json")));
    CHECK(meta["M"] == 2);
    CHECK(meta["wavelet_space"] == "haar");
}

TEST_CASE("rate and deviation subcommands") {
    const Run rate = run("rate --reps 2 --N 64 --n 64 --eps 0.0625 --eps 0.03125 --eps 0.015625 --eps 0.0078125 --out " +
                         path("rate.csv"));
    REQUIRE(rate.code == 0);
    CHECK(fs::exists(path("rate.json")));

    const Run dev = run("deviation --delta 2 --eps 0.1 --trials 20000");
    CHECK(dev.code == 0);
    CHECK(dev.out.rfind("PASS", 0) == 0);
}
