#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "nlslab/nlslab.hpp"

using namespace nlslab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "nlslab_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is);
    return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("config parsing: dotted keys, pi suffix, rationals, lists, errors") {
    auto cfg = Config::parse_string("scenario = rates\n"
                                    "grid.half_width = 40pi  # comment\n"
                                    "exponent.p = 4/3\n"
                                    "time.samples = 1, 2.5, 4\n"
                                    "flag.on = true\n");
    CHECK(cfg.get_string("scenario") == "rates");
    CHECK(cfg.get_double("grid.half_width") == Catch::Approx(40.0 * std::numbers::pi).epsilon(1e-15));
    CHECK(cfg.get_double("exponent.p") == Catch::Approx(4.0 / 3.0).epsilon(1e-15));
    auto rat = cfg.get_rational("exponent.p");
    REQUIRE(rat.has_value());
    CHECK(rat->first == 4);
    CHECK(rat->second == 3);
    auto lst = cfg.get_double_list("time.samples");
    REQUIRE(lst.size() == 3);
    CHECK(lst[1] == 2.5);
    CHECK(cfg.get_bool("flag.on", false));
    CHECK(cfg.get_double("missing.key", 7.0) == 7.0);
    CHECK_THROWS_AS(cfg.get_double("missing.key"), config_error);
    CHECK_THROWS_AS(Config::parse_string("novalue\n"), config_error);
    CHECK_THROWS_AS(Config::parse_string("k = 1x2\n").get_double("k"), config_error);
}

TEST_CASE("fnv digest is stable and distinguishes content") {
    CHECK(fnv1a64_digest("abc") == fnv1a64_digest("abc"));
    CHECK(fnv1a64_digest("abc") != fnv1a64_digest("abd"));
    CHECK(fnv1a64_digest("").rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("free-check scenario end to end") {
    auto dir = fresh_dir("free_check");
    auto cfg = Config::parse_string("scenario = free-check\n"
                                    "grid.points = 1024\n"
                                    "grid.half_width = 40pi\n");
    auto manifest = run_scenario(cfg, dir.string(), true);
    CHECK(manifest.all_pass());
    REQUIRE(manifest.verdicts.size() == 1);
    CHECK(manifest.verdicts[0].name == "gaussian_oracle_error");
    CHECK(manifest.verdicts[0].tolerance == 1e-10);
    CHECK(!manifest.verdicts[0].operation.empty());

    CHECK(fs::exists(dir / "oracle.csv"));
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "plot.csv"));
    CHECK(fs::exists(dir / "plot.py"));

    auto mj = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(mj["schema_version"] == kReportSchemaVersion);
    CHECK(mj["all_pass"] == true);
    CHECK(mj["files"].size() == manifest.files.size());
    for (const auto& f : manifest.files) {
        // inventory digests match the bytes on disk
        CHECK(f.digest == fnv1a64_digest(read_file_bytes((dir / f.path).string())));
    }
    auto rj = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(rj["schema_version"] == kReportSchemaVersion);
    CHECK(rj["verdicts"].size() == 1);
}

TEST_CASE("scenario config validation failures carry the regime message") {
    auto dir = fresh_dir("bad_regime");
    auto cfg = Config::parse_string("scenario = scatter-shortrange\n"
                                    "grid.points = 256\n"
                                    "grid.half_width = 20pi\n"
                                    "exponent.p = 1.0\n");
    try {
        run_scenario(cfg, dir.string(), true);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("short-range") != std::string::npos);
        CHECK(msg.find("LongRange") != std::string::npos);
    }
    auto cfg2 = Config::parse_string("scenario = no-such-scenario\n");
    CHECK_THROWS_AS(run_scenario(cfg2, dir.string(), true), config_error);
}

TEST_CASE("fk-lemma scenario: seeded sweep passes and is deterministic") {
    auto cfg = Config::parse_string("scenario = fk-lemma\n"
                                    "fk.count = 25\n"
                                    "fk.oracle_points = 20000\n"
                                    "seed = 777\n");
    auto d1 = fresh_dir("fk_a");
    auto d2 = fresh_dir("fk_b");
    auto m1 = run_scenario(cfg, d1.string(), true);
    auto m2 = run_scenario(cfg, d2.string(), true);
    CHECK(m1.all_pass());
    REQUIRE(m1.files.size() == m2.files.size());
    for (std::size_t i = 0; i < m1.files.size(); ++i) {
        CHECK(m1.files[i].path == m2.files[i].path);
        CHECK(m1.files[i].digest == m2.files[i].digest); // byte-identical outputs
    }
    // different seed changes the sampled cases
    auto cfg2 = cfg;
    cfg2.set("seed", "778");
    auto d3 = fresh_dir("fk_c");
    auto m3 = run_scenario(cfg2, d3.string(), true);
    bool any_diff = false;
    for (std::size_t i = 0; i < m1.files.size(); ++i)
        if (m1.files[i].path == "fk.csv" && m3.files[i].path == "fk.csv" && m1.files[i].digest != m3.files[i].digest)
            any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("lens-roundtrip scenario on a small grid") {
    auto dir = fresh_dir("lens_small");
    auto cfg = Config::parse_string("scenario = lens-roundtrip\n"
                                    "grid.points = 512\n"
                                    "grid.half_width = 20pi\n"
                                    "exponent.p = 3\n"
                                    "datum.amplitude = 0.5\n"
                                    "datum.width = 1.5\n"
                                    "time.dt = 5e-4\n");
    auto manifest = run_scenario(cfg, dir.string(), true);
    for (const auto& v : manifest.verdicts) {
        INFO(v.name << " value " << v.value << " tol " << v.tolerance);
        CHECK(v.pass);
    }
    CHECK(fs::exists(dir / "lens_identity.csv"));
    CHECK(fs::exists(dir / "lens_diagnostics.csv"));
}

TEST_CASE("conservation scenario passes its drift and order verdicts") {
    auto dir = fresh_dir("conservation_small");
    auto cfg = Config::parse_string("scenario = conservation\n"
                                    "grid.points = 512\n"
                                    "grid.half_width = 20pi\n"
                                    "exponent.p = 3\n"
                                    "datum.amplitude = 0.8\n"
                                    "datum.width = 1\n"
                                    "time.dt = 1e-3\n");
    auto manifest = run_scenario(cfg, dir.string(), true);
    for (const auto& v : manifest.verdicts) {
        INFO(v.name << " value " << v.value << " tol " << v.tolerance);
        CHECK(v.pass);
    }
    const std::string diag = slurp(dir / "diagnostics.csv");
    CHECK(diag.rfind("time,mass,energy,h1,sigma,lp2,variance,cone_ext,gauge_deficit", 0) == 0);
}

TEST_CASE("snapshot persistence round trip") {
    Grid g = make_grid(1, 64, 4.0);
    WaveField f(g, 1.5);
    for (std::size_t j = 0; j < g.size(); ++j)
        f.values[j] = cdouble(std::sin(0.1 * static_cast<double>(j)), std::cos(0.2 * static_cast<double>(j)));
    auto dir = fresh_dir("field_io");
    const std::string path = (dir / "field.csv").string();
    write_field_csv(path, f);
    WaveField back = read_field_csv(path);
    CHECK(back.grid == g);
    CHECK(back.time_tag == 1.5);
    CHECK(max_abs_diff(back, f) == 0.0); // %.17g round-trips doubles exactly
}
