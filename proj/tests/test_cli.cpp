#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using namespace std::string_literals;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() /
                 ("mfe_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path log = work_dir() / ("out_" + std::to_string(counter++));
  const std::string cmd =
      "\""s + MFE_CLI_PATH + "\" " + args + " > \"" + log.string() +
      "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(log);
  r.output.assign(std::istreambuf_iterator<char>(in),
                  std::istreambuf_iterator<char>());
  return r;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in),
          std::istreambuf_iterator<char>()};
}

void write_all(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

// One tiny envelope run shared by the file-based cases below.  Five cases on
// a 5x5 grid keep it under a second.
const fs::path& envelope_dir() {
  static const fs::path dir = [] {
    const fs::path d = work_dir() / "env";
    fs::create_directories(d);
    const fs::path manifest = work_dir() / "manifest.json";
    write_all(manifest, R"({
      "grid": {
        "v_kt": {"min": 70, "max": 150, "step": 20},
        "psidot_degps": {"min": -6, "max": 6, "step": 3},
        "gamma_deg": 0,
        "altitudes_ft": [0]
      },
      "cases": [
        {"name": "nominal"},
        {"name": "jam", "failure": {"surface": "rudder", "lower": -10, "upper": -10}},
        {"name": "jam_m", "mirror_of": "jam"},
        {"name": "rest_lo", "failure": {"surface": "rudder", "lower": -30, "upper": -10}},
        {"name": "rest_hi", "failure": {"surface": "rudder", "lower": -10, "upper": 30}}
      ]
    })");
    const RunResult r = run_cli("envelope --manifest \"" + manifest.string() +
                                "\" --out \"" + d.string() +
                                "\" --quiet --parallelism 2");
    REQUIRE(r.exit_code == 0);
    return d;
  }();
  return dir;
}

std::string slice(const std::string& case_name) {
  return (envelope_dir() / (case_name + "_h0ft_g0deg.csv")).string();
}

}  // namespace

TEST_CASE("version flag prints and exits cleanly") {
  const RunResult r = run_cli("--version");
  CHECK(r.exit_code == 0);
  CHECK(!r.output.empty());
}

TEST_CASE("unknown options and missing subcommands are usage errors") {
  CHECK(run_cli("trim --v-kt 100 --warp-factor 9").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("trim").exit_code == 2);  // --v-kt is required
  CHECK(run_cli("summon-dragon").exit_code == 2);
}

TEST_CASE("a level trim in the heart of the envelope solves") {
  const RunResult r = run_cli("trim --v-kt 120");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "status:   stable"));
  CHECK(contains(r.output, "controls:"));
}

TEST_CASE("json trim output is machine readable") {
  const RunResult r = run_cli("trim --v-kt 120 --psidot-degps 4 --json");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"status\": \"stable\""));
  CHECK(contains(r.output, "\"alpha_deg\""));
}

TEST_CASE("a below-stall target reports infeasible with a nonzero exit") {
  const RunResult r = run_cli("trim --v-kt 45");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "status:   infeasible"));
  CHECK(contains(r.output, "alpha"));
}

TEST_CASE("an inverted failure window is rejected as bad input") {
  const RunResult r = run_cli("trim --v-kt 100 --failure rudder:10:-10");
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "error"));
}

TEST_CASE("a jammed rudder changes the printed trim") {
  const RunResult r = run_cli("trim --v-kt 100 --failure rudder:-10 --json");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"failure\""));
  const bool pinned = contains(r.output, "\"rudder_deg\": -10.0") ||
                      contains(r.output, "\"rudder_deg\": -9.99999");
  CHECK(pinned);
}

TEST_CASE("parameter sets dump to json and load back") {
  const fs::path out = work_dir() / "params.json";
  CHECK(run_cli("params --out \"" + out.string() + "\"").exit_code == 0);
  CHECK(contains(read_all(out), "\"CLalpha\""));
  CHECK(run_cli("trim --v-kt 100 --params \"" + out.string() + "\"")
            .exit_code == 0);
}

TEST_CASE("the linear model dump writes both matrices") {
  const fs::path prefix = work_dir() / "lm";
  const RunResult r =
      run_cli("trim --v-kt 100 --dump-linear \"" + prefix.string() + "\"");
  CHECK(r.exit_code == 0);
  const std::string a = read_all(prefix.string() + "_A.csv");
  CHECK(contains(a, "V,alpha,beta"));
  const std::string b = read_all(prefix.string() + "_B.csv");
  CHECK(contains(b, "throttle,elevator,aileron,rudder"));
}

TEST_CASE("an envelope run writes slices and a summary") {
  CHECK(fs::exists(slice("nominal")));
  CHECK(fs::exists(slice("jam")));
  CHECK(fs::exists(slice("jam_m")));
  const std::string summary = read_all(envelope_dir() / "run_summary.json");
  CHECK(contains(summary, "\"params_hash\""));
  CHECK(contains(summary, "\"validation\""));
  CHECK(contains(summary, "\"passed\": true"));
}

TEST_CASE("a missing manifest is bad input, not a crash") {
  const RunResult r = run_cli("envelope --manifest /nonexistent/m.json");
  CHECK(r.exit_code != 0);
  CHECK(r.exit_code != 3);
}

TEST_CASE("the jam envelope verifies against its flanking restrictions") {
  const RunResult r = run_cli("verify intersection --jam \"" + slice("jam") +
                              "\" --lower \"" + slice("rest_lo") +
                              "\" --upper \"" + slice("rest_hi") + "\"");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "verdict: PASS"));
}

TEST_CASE("the mirrored case verifies as the mirror of its source") {
  const RunResult r = run_cli("verify symmetry --a \"" + slice("jam") +
                              "\" --b \"" + slice("jam_m") + "\"");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "verdict: PASS"));
}

TEST_CASE("a tampered envelope file fails verification with the cell named") {
  std::string content = read_all(slice("jam_m"));
  const std::size_t pos = content.find(",stable,");
  REQUIRE(pos != std::string::npos);
  content.replace(pos, 8, ",infeasible,");
  const fs::path tampered = work_dir() / "tampered.csv";
  write_all(tampered, content);

  const RunResult r = run_cli("verify symmetry --a \"" + slice("jam") +
                              "\" --b \"" + tampered.string() + "\"");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "verdict: FAIL"));
  CHECK(contains(r.output, "mask differences: 1"));

  const RunResult ri = run_cli("verify intersection --jam \"" +
                               tampered.string() + "\" --lower \"" +
                               slice("rest_lo") + "\" --upper \"" +
                               slice("rest_hi") + "\"");
  CHECK(ri.exit_code == 1);
  CHECK(contains(ri.output, "V = "));
}

TEST_CASE("straight-flight edges obey the stall and thrust laws") {
  const RunResult r =
      run_cli("verify laws --envelope \"" + slice("nominal") + "\"");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "stall boundary"));
  CHECK(contains(r.output, "thrust boundary"));
  CHECK(contains(r.output, "verdict: PASS"));
}

TEST_CASE("boundary classification prints a factor histogram") {
  const fs::path out = work_dir() / "boundary.csv";
  const fs::path sep = work_dir() / "separation.json";
  const RunResult r = run_cli(
      "boundary --envelope \"" + slice("jam") + "\" --out \"" + out.string() +
      "\" --compare-to \"" + slice("nominal") + "\" --separation-out \"" +
      sep.string() + "\"");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "boundary cells:"));
  CHECK(contains(r.output, "most affected:"));
  CHECK(contains(read_all(out), "# mfe boundary report"));
  CHECK(contains(read_all(sep), "\"retreat_cells\""));
}

TEST_CASE("every plotdata kind writes its file") {
  const fs::path dir = work_dir();
  CHECK(run_cli("plotdata envelope --envelope \"" + slice("nominal") +
                "\" --out \"" + (dir / "pe.csv").string() + "\" --svg \"" +
                (dir / "pe.svg").string() + "\"")
            .exit_code == 0);
  CHECK(contains(read_all(dir / "pe.csv"), "# mfe envelope plotdata"));
  CHECK(contains(read_all(dir / "pe.svg"), "<svg"));

  CHECK(run_cli("plotdata boundary --envelope \"" + slice("nominal") +
                "\" --out \"" + (dir / "pb.csv").string() + "\"")
            .exit_code == 0);
  CHECK(contains(read_all(dir / "pb.csv"), "# mfe boundary plotdata"));

  CHECK(run_cli("plotdata thrust_curves --alts-ft 0,10000 --out \"" +
                (dir / "pt.csv").string() + "\"")
            .exit_code == 0);
  CHECK(contains(read_all(dir / "pt.csv"), "# mfe thrust curves"));

  CHECK(run_cli("plotdata state_traces --envelope \"" + slice("nominal") +
                "\" --out \"" + (dir / "ps.csv").string() + "\"")
            .exit_code == 0);
  CHECK(contains(read_all(dir / "ps.csv"), "# mfe state traces"));

  CHECK(run_cli("plotdata feng_shui --envelope x --out y").exit_code == 2);
}

TEST_CASE("rerunning the manifest reproduces the slice files byte for byte") {
  const fs::path d2 = work_dir() / "env2";
  fs::create_directories(d2);
  const RunResult r =
      run_cli("envelope --manifest \"" + (work_dir() / "manifest.json").string() +
              "\" --out \"" + d2.string() + "\" --quiet --parallelism 1");
  REQUIRE(r.exit_code == 0);
  for (const char* name : {"nominal", "jam", "jam_m", "rest_lo", "rest_hi"}) {
    const std::string fname = std::string(name) + "_h0ft_g0deg.csv";
    CHECK(read_all(envelope_dir() / fname) == read_all(d2 / fname));
  }
}
