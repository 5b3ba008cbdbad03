#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string binary_path() {
    const char* env = std::getenv("BSDE_LAB_BIN");
    REQUIRE_MESSAGE(env != nullptr, "BSDE_LAB_BIN must point at the bsde-lab binary");
    return env;
}

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

CliResult run_cli(const std::string& args, const std::string& extra_env = "") {
    const std::string cmd = extra_env + (extra_env.empty() ? "" : " ") + "\"" + binary_path() +
                            "\" " + args + " 2>&1";
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[512];
    while (std::fgets(buf, sizeof(buf), pipe)) res.output += buf;
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("bsdelab_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

constexpr const char* kRepresentationCfg =
    "experiment = representation\n"
    "grid.T = 1.0\n"
    "grid.N = 80\n"
    "generator.kind = linear\n"
    "generator.b = 1.0\n"
    "probe.z = 1.0\n";

constexpr const char* kSolveCfg =
    "experiment = solve\n"
    "grid.T = 1.0\n"
    "grid.N = 32\n"
    "paths.M = 4096\n"
    "paths.seed = 7\n"
    "generator.kind = linear\n"
    "generator.b = 1.0\n"
    "terminal.kind = w_t\n";

} // namespace

TEST_CASE("representation run: linear probe rows exact, exit 0") {
    const auto dir = fresh_dir("rep");
    write_file(dir / "rep.cfg", kRepresentationCfg);
    const auto res = run_cli("run " + (dir / "rep.cfg").string() + " --out-dir " + dir.string());
    CAPTURE(res.output);
    CHECK(res.exit_code == 0);

    std::ifstream csv(dir / "representation_results.csv");
    REQUIRE(csv.good());
    std::string line;
    std::getline(csv, line);
    CHECK(line == "epsilon,d_eps,l2_error,std_error");
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        std::istringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ','); // epsilon
        std::getline(ss, cell, ','); // d_eps
        std::getline(ss, cell, ','); // l2_error
        CHECK(std::stod(cell) <= 1e-3);
    }
    CHECK(rows == 4);
}

TEST_CASE("malformed config: missing key named, exit 2") {
    const auto dir = fresh_dir("missing");
    write_file(dir / "bad.cfg",
               "experiment = solve\ngrid.N = 32\ngenerator.kind = zero\n"); // no grid.T
    const auto res = run_cli("run " + (dir / "bad.cfg").string());
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("grid.T") != std::string::npos);
}

TEST_CASE("malformed config: parse errors carry line and column, exit 2") {
    const auto dir = fresh_dir("parse");
    write_file(dir / "bad.cfg", "experiment = solve\ngrid.T 1.0\n");
    const auto res = run_cli("run " + (dir / "bad.cfg").string());
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("line 2") != std::string::npos);
    CHECK(res.output.find("column") != std::string::npos);
}

TEST_CASE("axiom suite with a non-A5 driver: verdict failure names A5, exit 1") {
    const auto dir = fresh_dir("a5");
    write_file(dir / "suite.cfg",
               "experiment = axiom-suite\n"
               "grid.T = 1.0\n"
               "grid.N = 16\n"
               "paths.M = 2048\n"
               "generator.kind = linear\n"
               "generator.b = 1.0\n"
               "generator.c = 0.5\n");
    const auto res = run_cli("run " + (dir / "suite.cfg").string() + " --out-dir " + dir.string());
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("A5 violated") != std::string::npos);
}

TEST_CASE("numerical failure maps to exit 3") {
    const auto dir = fresh_dir("blowup");
    write_file(dir / "blow.cfg",
               "experiment = solve\n"
               "grid.T = 1.0\n"
               "grid.N = 8\n"
               "paths.M = 64\n"
               "generator.kind = zero\n"
               "terminal.kind = forward_t\n"
               "forward.kind = square\n"
               "forward.x0 = 1e200\n");
    const auto res = run_cli("run " + (dir / "blow.cfg").string() + " --out-dir " + dir.string());
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("path") != std::string::npos);
}

TEST_CASE("list subcommand is stable and shows catalog flags") {
    const auto a = run_cli("list");
    CHECK(a.exit_code == 0);
    CHECK(a.output.find("kappa_abs_z") != std::string::npos);
    CHECK(a.output.find("convex_in_z=true") != std::string::npos);
    const auto b = run_cli("list");
    CHECK(a.output == b.output);
}

TEST_CASE("determinism: identical configs produce byte-identical outputs") {
    const auto dir = fresh_dir("determinism");
    write_file(dir / "solve.cfg", kSolveCfg);
    const auto out1 = dir / "run1";
    const auto out2 = dir / "run2";
    CHECK(run_cli("run " + (dir / "solve.cfg").string() + " --out-dir " + out1.string()).exit_code == 0);
    CHECK(run_cli("run " + (dir / "solve.cfg").string() + " --out-dir " + out2.string()).exit_code == 0);
    const std::string csv1 = read_file(out1 / "solve_results.csv");
    CHECK(!csv1.empty());
    CHECK(csv1 == read_file(out2 / "solve_results.csv"));
    CHECK(read_file(out1 / "solve_verdicts.json") == read_file(out2 / "solve_verdicts.json"));
    CHECK(read_file(out1 / "solve_chart.svg") == read_file(out2 / "solve_chart.svg"));
}

TEST_CASE("seed override changes the results") {
    const auto dir = fresh_dir("seed");
    write_file(dir / "solve.cfg", kSolveCfg);
    const auto out1 = dir / "run1";
    const auto out2 = dir / "run2";
    CHECK(run_cli("run " + (dir / "solve.cfg").string() + " --out-dir " + out1.string()).exit_code == 0);
    CHECK(run_cli("run " + (dir / "solve.cfg").string() + " --seed 99 --out-dir " +
                  out2.string()).exit_code == 0);
    CHECK(read_file(out1 / "solve_results.csv") != read_file(out2 / "solve_results.csv"));
}

TEST_CASE("BSDE_LAB_OUT environment variable overrides --out-dir") {
    const auto dir = fresh_dir("envout");
    write_file(dir / "solve.cfg", kSolveCfg);
    const auto flag_dir = dir / "flagged";
    const auto env_dir = dir / "enved";
    const auto res = run_cli("run " + (dir / "solve.cfg").string() + " --out-dir " +
                                 flag_dir.string(),
                             "BSDE_LAB_OUT=" + env_dir.string());
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(env_dir / "solve_results.csv"));
    CHECK_FALSE(fs::exists(flag_dir / "solve_results.csv"));
}

TEST_CASE("jobs flag leaves outputs bit-identical") {
    const auto dir = fresh_dir("jobs");
    write_file(dir / "solve.cfg", kSolveCfg);
    const auto out1 = dir / "serial";
    const auto out2 = dir / "threaded";
    CHECK(run_cli("run " + (dir / "solve.cfg").string() + " --out-dir " + out1.string()).exit_code == 0);
    CHECK(run_cli("run " + (dir / "solve.cfg").string() + " --jobs 4 --out-dir " +
                  out2.string()).exit_code == 0);
    CHECK(read_file(out1 / "solve_results.csv") == read_file(out2 / "solve_results.csv"));
}

TEST_CASE("unknown catalog labels are refused, exit 2") {
    const auto dir = fresh_dir("unknown");
    write_file(dir / "bad.cfg",
               "experiment = solve\ngrid.T = 1.0\ngrid.N = 8\npaths.M = 64\n"
               "generator.kind = bogus\n");
    const auto res = run_cli("run " + (dir / "bad.cfg").string());
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("bogus") != std::string::npos);
}

TEST_CASE("every experiment kind dispatches end to end") {
    const auto dir = fresh_dir("kinds");
    const std::string common =
        "grid.T = 1.0\n"
        "grid.N = 32\n"
        "paths.M = 4096\n"
        "paths.seed = 7\n";

    write_file(dir / "transposition.cfg", "experiment = transposition-check\n" + common +
                                              "generator.kind = kappa_abs_z\n"
                                              "generator.kappa = 0.5\n"
                                              "terminal.kind = w_t\n");
    write_file(dir / "gexp.cfg", "experiment = g-expectation\n" + common +
                                     "generator.kind = kappa_abs_z\n"
                                     "generator.kappa = 0.5\n"
                                     "terminal.kind = w_t\n"
                                     "enlargement.atoms = -1,1\n"
                                     "enlargement.probs = 0.5,0.5\n");
    write_file(dir / "suite.cfg", "experiment = axiom-suite\n" + common +
                                      "generator.kind = kappa_abs_z\n"
                                      "generator.kappa = 0.5\n");
    write_file(dir / "converse.cfg", "experiment = converse-comparison\n"
                                     "grid.T = 1.0\n"
                                     "grid.N = 32\n"
                                     "paths.M = 2048\n"
                                     "probe.paths = 2048\n"
                                     "generator.kind = linear\n"
                                     "generator.b = 0.5\n"
                                     "generator2.kind = kappa_abs_z\n"
                                     "generator2.kappa = 0.5\n");
    write_file(dir / "character.cfg", "experiment = characterization\n" + common +
                                          "generator.kind = kappa_abs_z\n"
                                          "generator.kappa = 0.5\n");
    write_file(dir / "forward_rep.cfg", "experiment = representation\n"
                                        "grid.T = 1.0\n"
                                        "grid.N = 80\n"
                                        "paths.M = 4096\n"
                                        "probe.form = forward\n"
                                        "probe.x = 1.0\n"
                                        "probe.p = 1.0\n"
                                        "probe.epsilons = 0.1,0.05\n"
                                        "forward.kind = linear\n"
                                        "forward.a = 1.0\n"
                                        "generator.kind = linear\n"
                                        "generator.b = 1.0\n"
                                        "tolerance.final_error = 0.15\n");

    for (const std::string name :
         {"transposition", "gexp", "suite", "converse", "character", "forward_rep"}) {
        const auto res = run_cli("run " + (dir / (name + ".cfg")).string() + " --out-dir " +
                                 (dir / name).string());
        CAPTURE(name);
        CAPTURE(res.output);
        CHECK(res.exit_code == 0);
        CHECK(fs::exists(dir / name)); // bundle written
        bool has_csv = false, has_json = false, has_svg = false;
        for (const auto& entry : fs::directory_iterator(dir / name)) {
            const auto ext = entry.path().extension().string();
            has_csv |= ext == ".csv";
            has_json |= ext == ".json";
            has_svg |= ext == ".svg";
        }
        CHECK(has_csv);
        CHECK(has_json);
        CHECK(has_svg);
    }
}

TEST_CASE("tolerance scale loosens verdicts") {
    const auto dir = fresh_dir("tolscale");
    // kappa |z| probe whose final error sits above an artificially tight
    // tolerance; scaling restores the pass.
    write_file(dir / "rep.cfg",
               "experiment = representation\n"
               "grid.T = 1.0\n"
               "grid.N = 80\n"
               "paths.M = 4096\n"
               "generator.kind = kappa_abs_z\n"
               "generator.kappa = 0.5\n"
               "probe.z = 1.0\n"
               "tolerance.final_error = 1e-6\n");
    const auto strict = run_cli("run " + (dir / "rep.cfg").string() + " --out-dir " +
                                (dir / "strict").string());
    CHECK(strict.exit_code == 1);
    const auto loose = run_cli("run " + (dir / "rep.cfg").string() +
                               " --tolerance-scale 100000 --out-dir " + (dir / "loose").string());
    CHECK(loose.exit_code == 0);
}
