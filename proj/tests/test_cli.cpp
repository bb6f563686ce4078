#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netsplit/io.hpp"
#include "netsplit/sbm.hpp"

using namespace netsplit;
namespace fs = std::filesystem;

namespace {

const std::string kCli = NETSPLIT_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "netsplit_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("cli end-to-end: split, cluster, infer", "[cli]") {
  const auto dir = fresh_dir("pipeline");
  const auto truth = sbm_mean_matrix(SbmConfig{
      30, 2, 12.0, 4.0, EdgeModel::poisson, std::numeric_limits<double>::quiet_NaN(),
      kDirectedLoops});
  const auto a = sample_network(truth.mean, EdgeModel::poisson, 0.0, 31);
  const auto in = dir / "a.csv";
  write_dense_csv(a, in.string());

  REQUIRE(run("split --mode poisson --epsilon 0.5 --seed 7 --in " + in.string() +
              " --kind directed-self --out-train " + (dir / "tr.csv").string() +
              " --out-test " + (dir / "te.csv").string()) == 0);
  REQUIRE(fs::exists(dir / "config.resolved.json"));

  // determinism: the same invocation writes byte-identical networks
  const auto tr1 = slurp(dir / "tr.csv");
  REQUIRE(run("split --mode poisson --epsilon 0.5 --seed 7 --in " + in.string() +
              " --kind directed-self --out-train " + (dir / "tr.csv").string() +
              " --out-test " + (dir / "te.csv").string()) == 0);
  REQUIRE(slurp(dir / "tr.csv") == tr1);

  REQUIRE(run("cluster --in " + (dir / "tr.csv").string() +
              " --kind directed-self --domain count --k 2 --restarts 10 --seed 3 --out " +
              (dir / "labels.csv").string()) == 0);

  REQUIRE(run("infer --model poisson --test " + (dir / "te.csv").string() + " --labels " +
              (dir / "labels.csv").string() +
              " --contrast cell:1,1 --epsilon 0.5 --alpha 0.1 --kind directed-self --out " +
              (dir / "result.json").string()) == 0);

  nlohmann::json j;
  std::ifstream(dir / "result.json") >> j;
  for (const char* key : {"estimate", "std_error", "lower", "upper", "level", "target",
                          "contrast", "gamma_or_epsilon"})
    REQUIRE(j.contains(key));
  REQUIRE(j["target"] == "theta");
  REQUIRE(j["level"] == 0.9);
}

TEST_CASE("cli exit codes", "[cli]") {
  const auto dir = fresh_dir("exitcodes");
  const auto in = dir / "a.edges";
  std::ofstream(in) << "1 2\n";

  SECTION("usage errors exit 1") {
    REQUIRE(run("split --mode poisson --epsilon 1.5 --seed 1 --in " + in.string() +
                " --out-train x --out-test y") == 1);
    REQUIRE(run("split --mode poisson --seed 1 --in " + in.string() +
                " --out-train x --out-test y") == 1);  // epsilon missing
    REQUIRE(run("definitely-not-a-subcommand") == 1);
  }

  SECTION("data errors exit 2") {
    REQUIRE(run("cluster --in " + (dir / "missing.edges").string() +
                " --k 2 --out " + (dir / "l.csv").string()) == 2);
    std::ofstream(dir / "loop.edges") << "1 1\n";
    REQUIRE(run("cluster --in " + (dir / "loop.edges").string() +
                " --kind undirected-noself --domain binary --k 1 --out " +
                (dir / "l.csv").string()) == 2);
  }

  SECTION("help and version exit 0") {
    REQUIRE(run("--version") == 0);
    REQUIRE(run("--help") == 0);
  }
}

TEST_CASE("cli config file: flags override file values", "[cli]") {
  const auto dir = fresh_dir("config");
  const auto truth = sbm_mean_matrix(SbmConfig{
      10, 1, 5.0, 5.0, EdgeModel::poisson, std::numeric_limits<double>::quiet_NaN(),
      kDirectedLoops});
  const auto a = sample_network(truth.mean, EdgeModel::poisson, 0.0, 2);
  const auto in = dir / "a.csv";
  write_dense_csv(a, in.string());

  {
    nlohmann::json cfg{{"mode", "poisson"}, {"epsilon", 0.5}, {"seed", 5},
                       {"in", in.string()}, {"kind", "directed-self"}};
    std::ofstream(dir / "run.json") << cfg.dump();
  }

  // config supplies everything except the outputs
  REQUIRE(run("split --config " + (dir / "run.json").string() + " --out-train " +
              (dir / "tr_cfg.csv").string() + " --out-test " + (dir / "te_cfg.csv").string()) ==
          0);
  // explicit flag beats the config value
  REQUIRE(run("split --config " + (dir / "run.json").string() + " --seed 9 --out-train " +
              (dir / "tr_flag.csv").string() + " --out-test " +
              (dir / "te_flag.csv").string()) == 0);
  REQUIRE(run("split --mode poisson --epsilon 0.5 --seed 9 --in " + in.string() +
              " --kind directed-self --out-train " + (dir / "tr_direct.csv").string() +
              " --out-test " + (dir / "te_direct.csv").string()) == 0);

  REQUIRE(slurp(dir / "tr_flag.csv") == slurp(dir / "tr_direct.csv"));
  REQUIRE(slurp(dir / "tr_cfg.csv") != slurp(dir / "tr_flag.csv"));

  // the resolved echo can reproduce the run verbatim
  nlohmann::json resolved;
  std::ifstream(dir / "config.resolved.json") >> resolved;
  REQUIRE(resolved["seed"] == 9);
  REQUIRE(resolved["mode"] == "poisson");
}
