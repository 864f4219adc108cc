#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* env = std::getenv("COOLCAV_CLI");
    if (env) return env;
#ifdef COOLCAV_CLI_PATH
    return COOLCAV_CLI_PATH;
#else
    return "";
#endif
}

int run_cli(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = cli_path() + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file;
    cmd += " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path tmp_dir() {
    const fs::path dir = fs::temp_directory_path() / "coolcav_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path path = tmp_dir() / name;
    std::ofstream(path) << body;
    return path;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kBase = R"(
params.gamma = 10.0
params.kappa = 0.025
params.cooperativity = 15
params.varphi_pi = 0.45
params.omega_p = 0.01
params.eta = 0.05
point.delta = 0
point.delta_cav = 1
)";

}  // namespace

TEST_CASE("cli: rates on a steady point") {
    REQUIRE_FALSE(cli_path().empty());
    const fs::path cfg = write_config("rates.cfg", kBase);
    const fs::path out = tmp_dir() / "rates.json";
    const int code =
        run_cli("rates --config " + cfg.string(), out.string());
    CHECK(code == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(out));
    CHECK(report["result"]["steady"].get<bool>());
    CHECK(report["result"]["mean_m"].get<double>() ==
          doctest::Approx(31.390533602077482).epsilon(1e-9));
    CHECK(report["cooperativity"].get<double>() ==
          doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("cli: antinode point reports no steady state") {
    const fs::path cfg2 = write_config("antinode.cfg", R"(
params.gamma = 10.0
params.kappa = 0.025
params.g = 8.75
params.varphi_pi = 0
params.omega_p = 0.01
params.eta = 0.05
point.delta = 0
point.delta_cav = 1
)");
    const fs::path out = tmp_dir() / "antinode.json";
    const int code = run_cli("rates --config " + cfg2.string(), out.string());
    CHECK(code == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(out));
    CHECK_FALSE(report["result"]["steady"].get<bool>());
    CHECK(report["result"]["Gamma"].get<double>() == 0.0);
    CHECK(report["result"]["mean_m"].is_null());
    bool antinode_warning = false;
    for (const auto& w : report["warnings"])
        if (w.get<std::string>().find("antinode") != std::string::npos)
            antinode_warning = true;
    CHECK(antinode_warning);
}

TEST_CASE("cli: malformed config exits 2") {
    const fs::path cfg = write_config("broken.cfg", "params.gamma 10\n");
    CHECK(run_cli("rates --config " + cfg.string()) == 2);
    CHECK(run_cli("rates --config /nonexistent/file.cfg") == 4);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("rates --config") == 2);
}

TEST_CASE("cli: sweep smoke grid") {
    const fs::path csv = tmp_dir() / "smoke.csv";
    const fs::path cfg = write_config(
        "sweep.cfg", std::string(kBase) + R"(
grid.delta.min = -1
grid.delta.max = 1
grid.delta.n = 2
grid.delta_cav.min = 0
grid.delta_cav.max = 2
grid.delta_cav.n = 2
output.csv = )" + csv.string() +
                         "\n");
    const int code = run_cli("sweep --config " + cfg.string(),
                             (tmp_dir() / "sweep.out").string());
    CHECK(code == 0);
    const std::string body = slurp(csv);
    CHECK(std::count(body.begin(), body.end(), '\n') == 5);  // header + 4
    CHECK(fs::exists(csv.string() + ".meta.json"));
    // overrides win: shrink the grid from the command line
    const int code2 = run_cli("sweep --config " + cfg.string() +
                              " --grid.delta.n=3",
                              (tmp_dir() / "sweep2.out").string());
    CHECK(code2 == 0);
    const std::string body2 = slurp(csv);
    CHECK(std::count(body2.begin(), body2.end(), '\n') == 7);
}

TEST_CASE("cli: COOLCAV_THREADS does not change sweep bytes") {
    const fs::path csv1 = tmp_dir() / "t1.csv";
    const fs::path csv4 = tmp_dir() / "t4.csv";
    const std::string grid = std::string(kBase) + R"(
grid.delta.min = -2
grid.delta.max = 2
grid.delta.n = 40
grid.delta_cav.min = -2
grid.delta_cav.max = 2
grid.delta_cav.n = 40
)";
    const fs::path cfg = write_config("threads.cfg", grid);
    const std::string base_cmd = cli_path() + " sweep --config " +
                                 cfg.string() + " --output.csv=";
    CHECK(std::system(("COOLCAV_THREADS=1 " + base_cmd + csv1.string() +
                       " > /dev/null 2>&1")
                          .c_str()) == 0);
    CHECK(std::system(("COOLCAV_THREADS=4 " + base_cmd + csv4.string() +
                       " > /dev/null 2>&1")
                          .c_str()) == 0);
    CHECK(slurp(csv1) == slurp(csv4));
    CHECK_FALSE(slurp(csv1).empty());
}

TEST_CASE("cli: unwritable output exits 4") {
    const fs::path cfg = write_config(
        "unwritable.cfg", std::string(kBase) + R"(
grid.delta.min = -1
grid.delta.max = 1
grid.delta.n = 2
grid.delta_cav.min = 0
grid.delta_cav.max = 2
grid.delta_cav.n = 2
output.csv = /nonexistent_dir/out.csv
)");
    CHECK(run_cli("sweep --config " + cfg.string()) == 4);
}

TEST_CASE("cli: evolve on a steady point fits the analytic rate") {
    const fs::path traj = tmp_dir() / "traj.csv";
    const fs::path cfg = write_config(
        "evolve.cfg", std::string(kBase) +
                          "point.delta = 15.666666666666666\n"
                          "point.delta_cav = -0.97\n"
                          "params.cooperativity = 3\n"
                          "evolve.initial_mean = 2\n"
                          "evolve.samples = 60\n"
                          "output.trajectory = " +
                          traj.string() + "\n");
    const fs::path out = tmp_dir() / "evolve.out";
    const int code = run_cli("evolve --config " + cfg.string(), out.string());
    CHECK(code == 0);
    const std::string log = slurp(out);
    CHECK(log.find("fitted Gamma") != std::string::npos);
    const std::string body = slurp(traj);
    CHECK(body.rfind("t,mean_m,p0,pM_tail_mass\n", 0) == 0);
}

TEST_CASE("cli: evolve reports heating on a heating point") {
    const fs::path cfg = write_config(
        "heating.cfg", std::string(kBase) +
                           "point.delta = 3\n"
                           "point.delta_cav = 3\n"
                           "evolve.initial_mean = 1\n"
                           "evolve.truncation = 40\n"
                           "output.trajectory = " +
                           (tmp_dir() / "heat.csv").string() + "\n");
    const fs::path out = tmp_dir() / "heating.out";
    const int code = run_cli("evolve --config " + cfg.string(), out.string());
    CHECK(code == 0);
    CHECK(slurp(out).find("heating") != std::string::npos);
}

TEST_CASE("cli: limits report") {
    const fs::path cfg = write_config("limits.cfg", R"(
params.gamma = 10.0
params.kappa = 0.025
params.g = 0.0001
params.varphi_pi = 0.4999999
params.omega_p = 0.01
params.eta = 0.05
)");
    const fs::path out = tmp_dir() / "limits.json";
    CHECK(run_cli("limits --config " + cfg.string(), out.string()) == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(out));
    CHECK(report["doppler"]["mean_m"].get<double>() ==
          doctest::Approx(2.0).epsilon(1e-6));
    CHECK(report["doppler"]["regime_ok"].get<bool>());
    CHECK_FALSE(report["sideband"]["regime_ok"].get<bool>());

    // g = 0 degenerates the EIT optimum
    const fs::path cfg0 = write_config("limits0.cfg", R"(
params.gamma = 10.0
params.kappa = 0.025
params.g = 0
params.varphi_pi = 0.3
params.omega_p = 0.01
params.eta = 0.05
)");
    const fs::path out0 = tmp_dir() / "limits0.json";
    CHECK(run_cli("limits --config " + cfg0.string(), out0.string()) == 0);
    const nlohmann::json rep0 = nlohmann::json::parse(slurp(out0));
    CHECK(rep0["eit"].contains("error"));
    CHECK(rep0["eit"]["error"].get<std::string>().find("DegenerateOptimum") !=
          std::string::npos);
}

TEST_CASE("cli: oracle validation report") {
    const fs::path cfg = write_config(
        "oracle.cfg", R"(
params.gamma = 0.15
params.kappa = 4.5
params.cooperativity = 25
params.varphi_pi = 0.3333333333333333
params.omega_p = 0.1
params.eta = 0.05
point.delta = 0.5
point.delta_cav = 4.625
oracle.n_cavity = 2
oracle.n_motion = 5
)");
    const fs::path out = tmp_dir() / "oracle.json";
    const int code = run_cli("oracle --config " + cfg.string(), out.string());
    CHECK(code == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(out));
    CHECK(std::abs(report["mean_m_relative_deviation"].get<double>()) < 0.15);
    CHECK(std::abs(report["gamma_relative_deviation"].get<double>()) < 0.2);
    CHECK(report["converged"].get<bool>());

    // a heating point is rejected up front
    const int bad = run_cli("oracle --config " + cfg.string() +
                            " --point.delta=-2.025 --point.delta_cav=5");
    CHECK(bad == 2);
}
