// End-to-end checks of the installed CLI binary via subprocesses.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

#include "nlohmann/json.hpp"

#include "ksynth/io.hpp"

using namespace ksynth;
namespace fs = std::filesystem;

namespace {

const char* cli = KSYNTH_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = std::string(cli) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("basis command persists a universal basis and reruns identically") {
  const fs::path out = fresh_dir("ksynth_cli_basis");
  REQUIRE(run("basis --model ising --L 3 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "basis" / "meta.json"));
  CHECK(fs::exists(out / "manifest.json"));

  const nlohmann::json meta = nlohmann::json::parse(read_file(out / "basis" / "meta.json"));
  CHECK(meta["total_dim"] == 63);
  CHECK(meta["length"] == 3);
  const std::string digest = file_digest(out / "basis" / "meta.json");

  // rerun reproduces the same meta bytes
  const fs::path out2 = fresh_dir("ksynth_cli_basis2");
  REQUIRE(run("basis --model ising --L 3 --out " + out2.string()) == 0);
  CHECK(file_digest(out2 / "basis" / "meta.json") == digest);

  fs::remove_all(out);
  fs::remove_all(out2);
}

TEST_CASE("basis sweep emits the depth table") {
  const fs::path out = fresh_dir("ksynth_cli_sweep");
  REQUIRE(run("basis --sweep-L 2..3 --out " + out.string()) == 0);
  const std::string csv = read_file(out / "depth_vs_L.csv");
  CHECK(csv.find("L,M_ising,dim_ising,M_heisenberg,dim_heisenberg") == 0);
  CHECK(csv.find("\n2,") != std::string::npos);
  CHECK(csv.find("\n3,") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("access command writes one row per single-qubit Pauli") {
  const fs::path out = fresh_dir("ksynth_cli_access");
  REQUIRE(run("access --model ising --L 3 --out " + out.string()) == 0);
  const std::string csv = read_file(out / "access_depth.csv");
  CHECK(csv.find("site,axis,J_containment,J_first_overlap,contained") == 0);
  int rows = -1;  // header
  for (const char c : csv) rows += c == '\n';
  CHECK(rows == 9);  // 3 sites x 3 axes
  // H_break = X on site 0 sits in the native span
  CHECK(csv.find("0,X,0,0,yes") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("smin command emits map, frontier and svg") {
  const fs::path out = fresh_dir("ksynth_cli_smin");
  REQUIRE(run("smin --model ising --L 3 --out " + out.string()) == 0);
  CHECK(read_file(out / "smin_map.csv").find("J,m,s_min") == 0);
  CHECK(read_file(out / "smin_frontier.csv").find("s_min,first_J") == 0);
  CHECK(read_file(out / "smin_map.svg").find("<svg") == 0);
  fs::remove_all(out);
}

TEST_CASE("xxz command on a heisenberg simulator with delta=1 closes at once") {
  const fs::path out = fresh_dir("ksynth_cli_xxz");
  REQUIRE(run("xxz --model heisenberg --L 2 --delta 1.0 --budget 400 --restarts 1 "
              "--schedule 1,2 --out " +
              out.string()) == 0);
  const std::string residual = read_file(out / "xxz_residual.csv");
  CHECK(residual.find("J,P_J,R_J") == 0);
  // target equals H_int: all weight in block 0
  CHECK(residual.find("\n0,1,") != std::string::npos);

  const std::string loss = read_file(out / "xxz_loss.csv");
  const auto last_comma = loss.find_last_of(',');
  const Real final_loss = std::stod(loss.substr(last_comma + 1));
  CHECK(final_loss < 1e-6);
  CHECK(fs::exists(out / "xxz_pulse.csv"));
  CHECK(fs::exists(out / "xxz_pulse.json"));
  fs::remove_all(out);
}

TEST_CASE("config file feeds defaults and flags override") {
  const fs::path out = fresh_dir("ksynth_cli_config");
  const fs::path cfg = out / "config.json";
  atomic_write_file(cfg, nlohmann::json{{"model", "heisenberg"}, {"L", 2}}.dump());

  REQUIRE(run("basis --config " + cfg.string() + " --out " + out.string()) == 0);
  nlohmann::json meta = nlohmann::json::parse(read_file(out / "basis" / "meta.json"));
  CHECK(meta["model"] == "heisenberg");
  CHECK(meta["length"] == 2);

  // explicit flag wins over the config value
  REQUIRE(run("basis --config " + cfg.string() + " --L 3 --out " + out.string()) == 0);
  meta = nlohmann::json::parse(read_file(out / "basis" / "meta.json"));
  CHECK(meta["length"] == 3);
  fs::remove_all(out);
}

TEST_CASE("bad input exits with code 2") {
  CHECK(run("basis --model nonsense --L 3") == 2);
  CHECK(run("definitely-not-a-subcommand") == 2);
  CHECK(run("xxz --model ising --L 2 --schedule 4,2") == 2);
}

TEST_CASE("layer-sweep on a tiny instance produces all artifacts") {
  const fs::path out = fresh_dir("ksynth_cli_layer");
  REQUIRE(run("layer-sweep --model ising --L 2 --layers 0,1 --samples 1 --budget 150 "
              "--restarts 1 --schedule 1,2,4,8,16 --jobs 2 --out " +
              out.string()) == 0);
  for (const char* name : {"layer_losses.csv", "layer_nc.csv", "layer_aggregate.csv",
                           "fit.json", "layer_losses.svg", "nc_vs_layer.svg",
                           "manifest.json"}) {
    CHECK(fs::exists(out / name));
  }
  const std::string agg = read_file(out / "layer_aggregate.csv");
  CHECK(agg.find("layer,total,censored,mean_nc,stddev_nc") == 0);
  fs::remove_all(out);
}
