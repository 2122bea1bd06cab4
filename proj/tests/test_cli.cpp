#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("daqc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (work_dir() / name).string(); }

void write_file(const std::string& name, const std::string& text) { std::ofstream(path(name)) << text; }

std::string read_file(const std::string& name) {
  std::ifstream in(path(name));
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the CLI, capturing stdout into `out_name`; returns the exit status.
int run(const std::string& args, const std::string& out_name = "stdout.txt") {
  const std::string cmd = std::string(DAQC_CLI_PATH) + " " + args + " > " + path(out_name) + " 2> " +
                          path("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_triangle_inputs() {
  write_file("p.txt", "n_qubits=3\n0 1 z z 1\n0 2 z z -0.5\n");
  write_file("s.txt", "n_qubits=3\n0 1 z z 1\n0 2 z z 1\n");
  write_file("d.txt", "n_qubits=3\n0 1 z z\n0 2 z z\n1 2 z z\n");
}

}  // namespace

TEST_CASE("synth writes a schedule and analyze reports its bounds") {
  write_triangle_inputs();
  const std::string inputs = "--problem " + path("p.txt") + " --source " + path("s.txt") + " --defects " +
                             path("d.txt");
  REQUIRE(run("synth " + inputs + " --out " + path("sched.txt")) == 0);
  const std::string schedule = read_file("sched.txt");
  CHECK(schedule.rfind("n_qubits=3\n", 0) == 0);
  CHECK(schedule.find("mode=remove") != std::string::npos);

  REQUIRE(run("analyze --schedule " + path("sched.txt") + " --source " + path("s.txt") + " --problem " +
                  path("p.txt") + " --defects " + path("d.txt") + " --delta 0.1 --seed 4 --json --observable x0",
              "report.json") == 0);
  const auto report = nlohmann::json::parse(read_file("report.json"));
  CHECK(report["n_qubits"] == 3);
  CHECK(report["t_A"].get<double>() == doctest::Approx(1.0));
  CHECK(report["e_ds"] == 1);
  CHECK(report["exact_op_norm"].get<double>() <= report["op_norm_bound"].get<double>());
  CHECK_FALSE(report["exact_delta_O"].is_null());

  REQUIRE(run("synth " + inputs + " --mode mitigate --time 2 --out " + path("sched_m.txt")) == 0);
  REQUIRE(run("analyze --schedule " + path("sched_m.txt") + " --source " + path("s.txt") + " --defects " +
                  path("d.txt") + " --delta 0.1 --json",
              "report_m.json") == 0);
  const auto mitigated = nlohmann::json::parse(read_file("report_m.json"));
  CHECK(mitigated["t_A"].get<double>() == doctest::Approx(3.0));
  CHECK(mitigated["e_ds_effective"] == 0);
  CHECK(mitigated["op_norm_bound"] == mitigated["op_norm_bound_first_term"]);

  // Plain output lists one key per line.
  REQUIRE(run("analyze --schedule " + path("sched.txt") + " --source " + path("s.txt") + " --delta 0.1",
              "report.txt") == 0);
  CHECK(read_file("report.txt").find("op_norm_bound = ") != std::string::npos);
}

TEST_CASE("sweep and summarize") {
  const std::string sweep = "sweep --topology random --n-min 3 --n-max 5 --trials 4 --seed 9 --out ";
  REQUIRE(run(sweep + path("a.csv")) == 0);
  REQUIRE(run(sweep + path("b.csv") + " --threads 2") == 0);
  const std::string a = read_file("a.csv");
  CHECK(a == read_file("b.csv"));
  CHECK(a.rfind("trial_id,N,topology,mode,seed,", 0) == 0);
  CHECK(std::count(a.begin(), a.end(), '\n') == 13);

  REQUIRE(run("summarize --in " + path("a.csv") + " --out " + path("summary.csv")) == 0);
  const std::string summary = read_file("summary.csv");
  CHECK(summary.rfind("N,topology,mode,records,", 0) == 0);
  CHECK(summary.find("\n3,random,remove,4,") != std::string::npos);

  // Records without dense values summarize with a warning.
  REQUIRE(run(sweep + path("c.csv") + " --dense-cap 0") == 0);
  REQUIRE(run("summarize --in " + path("c.csv") + " --out " + path("summary_c.csv")) == 0);
  CHECK(read_file("stderr.txt").find("warning") != std::string::npos);
}

TEST_CASE("bad input exits with status 2") {
  write_triangle_inputs();
  CHECK(run("") == 2);
  CHECK(run("synth --problem " + path("p.txt")) == 2);
  CHECK(run("synth --problem " + path("missing.txt") + " --source " + path("s.txt") + " --defects " +
            path("d.txt") + " --out " + path("x.txt")) == 2);
  CHECK(run("synth --problem " + path("p.txt") + " --source " + path("s.txt") + " --defects " + path("d.txt") +
            " --mode sideways --out " + path("x.txt")) == 2);
  CHECK(run("synth --problem " + path("p.txt") + " --source " + path("s.txt") + " --defects " + path("d.txt") +
            " --time -1 --out " + path("x.txt")) == 2);

  // A problem coupling the source cannot produce.
  write_file("p_bad.txt", "n_qubits=3\n1 2 z z 1\n");
  CHECK(run("synth --problem " + path("p_bad.txt") + " --source " + path("s.txt") + " --defects " + path("d.txt") +
            " --out " + path("x.txt")) == 2);

  write_file("garbled.txt", "n_qubits=3\n0 1 q z 1\n");
  CHECK(run("synth --problem " + path("garbled.txt") + " --source " + path("s.txt") + " --defects " +
            path("d.txt") + " --out " + path("x.txt")) == 2);

  CHECK(run("sweep --topology ring --out " + path("x.csv")) == 2);
  CHECK(run("sweep --n-min 1 --out " + path("x.csv")) == 2);
  write_file("bad.csv", "not,a,results,file\n");
  CHECK(run("summarize --in " + path("bad.csv") + " --out " + path("x.csv")) == 2);
  CHECK(run("analyze --schedule " + path("missing.txt") + " --source " + path("s.txt") + " --delta 1") == 2);
  CHECK(run("--help") == 0);
}
