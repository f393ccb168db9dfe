#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "phl/commands.hpp"
#include "phl/config.hpp"
#include "phl/report_io.hpp"

namespace fs = std::filesystem;
using namespace phl;

namespace {

// Scratch directory removed on destruction.
class ScratchDir {
public:
    ScratchDir() {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("phl_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter.fetch_add(1)));
        fs::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

int run_cli(const std::string& args, const fs::path& log) {
    const std::string command = std::string(PHL_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_file(const fs::path& path, const std::string& text) {
    std::ofstream(path) << text;
    return path;
}

const char* kM2Constant = R"([domain]
n = 8
[higgs]
m = 2
degree = 4
gamma1 = constant 1 0
gamma2 = constant 0.6 0.8
[transport]
path = 0 0 | 0.1 0 | 0.1 0.1
)";

const char* kM2Fourier = R"([domain]
n = 16
[higgs]
m = 2
degree = 4
gamma1 = constant 1 0
gamma2 = fourier 0 0 1 0 | 1 0 0.05 0 | 0 1 0 0.05
)";

}  // namespace

TEST_CASE("config round trip") {
    std::istringstream in(kM2Fourier);
    const RunConfig cfg = parse_config(in);
    std::istringstream again(serialize_config(cfg));
    CHECK(parse_config(again) == cfg);
    CHECK(cfg.higgs.gammas[1].kind == GammaSpec::Kind::fourier);
    CHECK(cfg.higgs.gammas[1].terms.size() == 3);
}

TEST_CASE("config validation names the key") {
    std::istringstream unknown("[domain]\nresolution = 8\n");
    CHECK_THROWS_WITH_AS(parse_config(unknown), doctest::Contains("domain.resolution"), ConfigError);
    std::istringstream bad_n("[domain]\nn = -3\n[higgs]\nm = 1\ngamma1 = constant 1 0\n");
    CHECK_THROWS_AS(parse_config(bad_n), ConfigError);
    std::istringstream missing("[higgs]\nm = 2\ngamma1 = constant 1 0\n");
    CHECK_THROWS_AS(parse_config(missing), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/phl.ini"), IoError);
}

TEST_CASE("CSV readers reject malformed input") {
    ScratchDir dir;
    write_file(dir.path() / "ragged.csv", "1,2\n3\n");
    CHECK_THROWS_AS(read_csv(dir.path() / "ragged.csv"), ConfigError);
    write_file(dir.path() / "text.csv", "1,abc\n");
    CHECK_THROWS_AS(read_csv(dir.path() / "text.csv"), ConfigError);
    CHECK_THROWS_AS(read_csv(dir.path() / "absent.csv"), IoError);
}

TEST_CASE("exit codes") {
    ScratchDir dir;
    const fs::path log = dir.path() / "log.txt";
    const fs::path good = write_file(dir.path() / "good.ini", kM2Constant);
    const fs::path broken = write_file(dir.path() / "broken.ini", "[domain\nn = 8\n");
    const fs::path out = dir.path() / "out";

    CHECK(run_cli("solve --config " + broken.string(), log) == 4);
    CHECK(run_cli("solve --config " + (dir.path() / "absent.ini").string(), log) == 3);
    // The geometric commands read u.csv back; without a solve it is missing.
    CHECK(run_cli("verify --config " + good.string() + " --out " + out.string(), log) == 3);
    CHECK(run_cli("solve --config " + good.string() + " --out " + out.string(), log) == 0);
    CHECK(fs::exists(out / "u.csv"));
    CHECK(fs::exists(out / "convergence.json"));
    CHECK(run_cli("verify --config " + good.string() + " --out " + out.string(), log) == 0);
    CHECK(read_json(out / "verify.json")["failed"] == 0);
    CHECK(run_cli("bogus", log) == 4);

    const fs::path unstable = write_file(dir.path() / "unstable.ini",
                                         "[domain]\nn = 8\n[higgs]\nm = 2\ndegree = 0\ngamma1 = constant 1 0\n"
                                         "gamma2 = constant 0 0\n");
    CHECK(run_cli("solve --config " + unstable.string() + " --out " + out.string(), log) == 4);
    CHECK(slurp(log).find("unstable") != std::string::npos);
}

TEST_CASE("the verify report has one entry per invariant") {
    ScratchDir dir;
    const fs::path log = dir.path() / "log.txt";
    const fs::path cfg = write_file(dir.path() / "m2.ini", kM2Constant);
    const fs::path out = dir.path() / "out";
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out.string(), log) == 0);
    REQUIRE(run_cli("verify --config " + cfg.string() + " --out " + out.string(), log) == 0);
    const auto report = read_json(out / "verify.json");
    std::vector<std::string> names;
    for (const auto& c : report["checks"]) {
        names.push_back(c["name"].get<std::string>());
        CHECK(c.contains("value"));
        CHECK(c.contains("pass"));
    }
    const std::vector<std::string> expected{
        "hitchin_residual", "chain_bounded", "chain_ordered", "sigma_on_quadric", "immersion_conformal",
        "induced_metric", "harmonic_tangential", "holonomy_path_independence", "frenet_gram", "frenet_block_angle",
        "frenet_omega_isotropic", "frenet_tridiagonal", "frenet_conformal", "isotropic_order",
        "differential_mismatch", "differential_holomorphic", "gauss_conformality", "gauss_tension",
        "gauss_eigenvalues"};
    CHECK(names == expected);
    CHECK(report["all_pass"] == true);
}

TEST_CASE("the negative control fails at least three checks") {
    ScratchDir dir;
    const fs::path log = dir.path() / "log.txt";
    const fs::path cfg = write_file(dir.path() / "m2.ini", kM2Constant);
    const fs::path out = dir.path() / "out";
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out.string(), log) == 0);
    CHECK(run_cli("verify --corrupt --config " + cfg.string() + " --out " + out.string(), log) == 1);
    const auto report = read_json(out / "verify.json");
    CHECK(report["failed"].get<int>() >= 3);
    CHECK(slurp(log).find("FAIL") != std::string::npos);
}

TEST_CASE("outputs are identical across worker counts") {
    ScratchDir dir;
    const fs::path log = dir.path() / "log.txt";
    const fs::path cfg = write_file(dir.path() / "fourier.ini", kM2Fourier);
    const fs::path one = dir.path() / "one";
    const fs::path three = dir.path() / "three";
    REQUIRE(run_cli("solve --threads 1 --config " + cfg.string() + " --out " + one.string(), log) == 0);
    REQUIRE(run_cli("solve --threads 3 --config " + cfg.string() + " --out " + three.string(), log) == 0);
    CHECK(slurp(one / "u.csv") == slurp(three / "u.csv"));
    CHECK(!slurp(one / "u.csv").empty());

    const fs::path dev = write_file(dir.path() / "dev.ini",
                                    "[higgs]\nm = 1\ngamma1 = constant 1 0\n[devmap]\nper_axis = 8\n");
    REQUIRE(run_cli("devmap --threads 1 --config " + dev.string() + " --out " + one.string(), log) == 0);
    REQUIRE(run_cli("devmap --threads 3 --config " + dev.string() + " --out " + three.string(), log) == 0);
    CHECK(slurp(one / "devmap_samples.csv") == slurp(three / "devmap_samples.csv"));
    CHECK(slurp(one / "devmap.json") == slurp(three / "devmap.json"));
}

TEST_CASE("moduli output") {
    ScratchDir dir;
    const fs::path log = dir.path() / "log.txt";
    CHECK(run_cli("moduli 2 2 4 --json", log) == 0);
    const auto report = nlohmann::json::parse(slurp(log));
    CHECK(report == moduli_json(2, 2, 4));
    CHECK(report.dump().find("9") != std::string::npos);
    CHECK(run_cli("moduli 2 2 5", log) == 0);
    CHECK(slurp(log).find("empty") != std::string::npos);
    CHECK(run_cli("moduli 1 2 0", log) == 4);
}

TEST_CASE("in-process dispatch maps exceptions") {
    std::ostringstream log, err;
    CommandOptions opts;
    opts.config = "/nonexistent/phl.ini";
    CHECK(run_command("solve", opts, log, err) == exit_io);
    CHECK(run_command("nonsense", opts, log, err) == exit_validation);
}
