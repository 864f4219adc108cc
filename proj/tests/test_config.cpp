#include <doctest.h>

#include <cmath>
#include <numbers>

#include "coolcav/config.hpp"
#include "coolcav/model.hpp"

using namespace coolcav;
using std::numbers::pi;

namespace {

const char* kSample = R"(# sample run configuration
params.gamma = 10.0
params.kappa = 0.025       # cavity linewidth
params.cooperativity = 15
params.varphi_pi = 0.45
params.omega_p = 0.01
params.eta = 0.05

point.delta = 0
point.delta_cav = 1

grid.delta.min = -10
grid.delta.max = 4
grid.delta.n = 50
grid.delta_cav.min = -10
grid.delta_cav.max = 10
grid.delta_cav.n = 40
)";

}  // namespace

TEST_CASE("config parsing and typed access") {
    RunConfig cfg;
    cfg.kv = KeyValueConfig::from_text(kSample);
    const SystemParams p = cfg.system_params();
    CHECK(p.gamma == 10.0);
    CHECK(p.kappa == 0.025);
    CHECK(p.varphi == doctest::Approx(0.45 * pi).epsilon(1e-15));
    CHECK(cooperativity(p) == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(p.d0 == 1.0);  // default
    CHECK(p.phi == 0.0);

    const DetuningPoint d = cfg.detuning_point();
    CHECK(d.delta == 0.0);
    CHECK(d.delta_cav == 1.0);
    CHECK(d.delta_c() == -1.0);

    const SweepGrid grid = cfg.sweep_grid();
    CHECK(grid.delta.n == 50);
    CHECK(grid.delta_cav.max == 10.0);

    const OracleConfig oc = cfg.oracle_config();
    CHECK(oc.n_cavity == 3);
    CHECK(oc.tol == 1e-8);
}

TEST_CASE("round trip: parse(serialize(parse(text))) is identical") {
    const KeyValueConfig a = KeyValueConfig::from_text(kSample);
    const KeyValueConfig b = KeyValueConfig::from_text(a.serialize());
    CHECK(a.entries() == b.entries());
}

TEST_CASE("overrides win over file values") {
    RunConfig cfg;
    cfg.kv = KeyValueConfig::from_text(kSample);
    cfg.kv.apply_override("--point.delta=2.5");
    cfg.kv.apply_override("grid.delta.n=7");
    CHECK(cfg.detuning_point().delta == 2.5);
    CHECK(cfg.sweep_grid().delta.n == 7);
}

TEST_CASE("errors carry line numbers") {
    try {
        (void)KeyValueConfig::from_text("params.gamma = 1\nnonsense line\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    try {
        (void)KeyValueConfig::from_text("a = 1\n\nb = \n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("config validation failures") {
    RunConfig cfg;
    cfg.kv = KeyValueConfig::from_text(kSample);
    cfg.kv.apply_override("params.g=3.0");  // now both g and cooperativity
    CHECK_THROWS_AS((void)cfg.system_params(), ConfigError);

    RunConfig missing;
    missing.kv = KeyValueConfig::from_text("params.gamma = 1\n");
    CHECK_THROWS_AS((void)missing.system_params(), ConfigError);

    RunConfig bad_number;
    bad_number.kv = KeyValueConfig::from_text(kSample);
    bad_number.kv.apply_override("params.kappa=fast");
    CHECK_THROWS_AS((void)bad_number.system_params(), ConfigError);

    RunConfig both_angles;
    both_angles.kv = KeyValueConfig::from_text(kSample);
    both_angles.kv.apply_override("params.varphi=1.2");
    CHECK_THROWS_AS((void)both_angles.system_params(), ConfigError);

    RunConfig negative;
    negative.kv = KeyValueConfig::from_text(kSample);
    negative.kv.apply_override("params.gamma=-2");
    CHECK_THROWS_AS((void)negative.system_params(), ConfigError);
}

TEST_CASE("evolve options") {
    RunConfig cfg;
    cfg.kv = KeyValueConfig::from_text(
        "evolve.initial_level = 5\nevolve.truncation = 80\n"
        "evolve.samples = 100\n");
    const EvolveOptions e = cfg.evolve_options();
    CHECK(*e.initial_level == 5);
    CHECK(*e.truncation == 80);
    CHECK(e.samples == 100);
    CHECK_FALSE(e.initial_mean.has_value());

    RunConfig both;
    both.kv = KeyValueConfig::from_text(
        "evolve.initial_level = 5\nevolve.initial_mean = 2\n");
    CHECK_THROWS_AS((void)both.evolve_options(), ConfigError);
}

TEST_CASE("output paths and sweep curve") {
    RunConfig cfg;
    cfg.kv = KeyValueConfig::from_text(
        "output.csv = run.csv\nsweep.curve = resonance\n");
    const OutputPaths o = cfg.output_paths();
    CHECK(o.csv == "run.csv");
    CHECK(o.meta == "run.csv.meta.json");
    CHECK(cfg.sweep_curve() == CurveKind::resonance);

    cfg.kv.apply_override("sweep.curve=sideways");
    CHECK_THROWS_AS((void)cfg.sweep_curve(), ConfigError);
}

#ifdef COOLCAV_CONFIG_DIR
#include <filesystem>

TEST_CASE("every shipped figure config loads and builds a grid") {
    int seen = 0;
    for (const auto& entry :
         std::filesystem::directory_iterator(COOLCAV_CONFIG_DIR)) {
        if (entry.path().extension() != ".cfg") continue;
        ++seen;
        RunConfig cfg;
        cfg.kv = KeyValueConfig::from_file(entry.path().string());
        const SweepGrid grid = cfg.sweep_grid();
        CHECK(grid.delta.n == 200);
        CHECK(grid.delta_cav.n == 200);
        CHECK_NOTHROW((void)cfg.detuning_point());
        CHECK_NOTHROW((void)cfg.sweep_curve());
        // cooperativity keys reproduce round numbers
        const double coop = cooperativity(grid.params);
        CHECK(std::abs(coop - std::round(coop)) < 1e-9);
    }
    CHECK(seen == 6);
}
#endif

TEST_CASE("bool parsing") {
    KeyValueConfig kv = KeyValueConfig::from_text(
        "a = true\nb = off\nc = 1\nd = maybe\n");
    CHECK(kv.get_bool_or("a", false));
    CHECK_FALSE(kv.get_bool_or("b", true));
    CHECK(kv.get_bool_or("c", false));
    CHECK(kv.get_bool_or("missing", true));
    CHECK_THROWS_AS((void)kv.get_bool_or("d", false), ConfigError);
}
