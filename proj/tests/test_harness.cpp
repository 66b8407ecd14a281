#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "himpp/harness/run.hpp"

using namespace himpp;
namespace fs = std::filesystem;

namespace {

std::string write_tmp(const std::string& text) {
  static int counter = 0;
  std::string path = "harness_cfg_" + std::to_string(counter++) + ".txt";
  std::ofstream out(path);
  out << text;
  return path;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TmpFile {
  std::string path;
  explicit TmpFile(const std::string& text) : path(write_tmp(text)) {}
  ~TmpFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("empty config resolves to the documented defaults") {
  RunConfig cfg = parse_config("", {});
  CHECK(cfg.env == "lbfws");
  CHECK(cfg.preset == "mini");
  CHECK(cfg.variant == "himppo");
  CHECK(cfg.levels == 2);
  CHECK(cfg.seed == 0);
  CHECK(cfg.train.gamma == 0.99);
  CHECK(cfg.train.clip == 0.2);
  CHECK(cfg.train.epochs == 30);
}

TEST_CASE("file keys, comments and overrides all apply in order") {
  TmpFile f(
      "# comment line\n"
      "env = sampling\n"
      "preset = mini   # trailing comment\n"
      "levels = 3\n"
      "alpha = 5\n"
      "K = 2\n"
      "dynamic = true\n"
      "truncation = (T_w, 1)\n"
      "gamma = 0.95\n");
  RunConfig cfg = parse_config(f.path, {"seed=42", "gamma=0.9"});
  CHECK(cfg.env == "sampling");
  CHECK(cfg.levels == 3);
  CHECK(cfg.K == 2);
  CHECK(cfg.dynamic);
  CHECK(cfg.seed == 42);
  CHECK(cfg.train.gamma == 0.9);  // override wins over the file
  CHECK(cfg.train.trunc.variant == TruncationVariant::worker_scale);
  CHECK(cfg.train.trunc.t_star == 1);
  CHECK(cfg.train.seed == 42);
}

TEST_CASE("unknown keys and malformed values are rejected") {
  TmpFile f("banana = 3\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(f.path, {})),
                       doctest::Contains("banana"), ConfigError);
  TmpFile g("epochs = many\n");
  CHECK_THROWS_AS(static_cast<void>(parse_config(g.path, {})), ConfigError);
  TmpFile h("no equals sign here\n");
  CHECK_THROWS_AS(static_cast<void>(parse_config(h.path, {})), ConfigError);
  CHECK_THROWS_AS(static_cast<void>(parse_config("", {"variant=frob"})), ConfigError);
  CHECK_THROWS_AS(static_cast<void>(parse_config("missing_file.cfg", {})), ConfigError);
}

TEST_CASE("flat variants reject hierarchy keys, naming both") {
  TmpFile f("variant = ippo\nlevels = 3\n");
  try {
    parse_config(f.path, {});
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("variant") != std::string::npos);
    CHECK(msg.find("levels") != std::string::npos);
  }
  CHECK_THROWS_AS(static_cast<void>(parse_config("", {"variant=gppo-star", "fl=true"})),
                  ConfigError);
}

TEST_CASE("truncation grammar") {
  CHECK(parse_truncation("none").variant == TruncationVariant::none);
  TruncationScheme ts = parse_truncation("(T_s, 3)");
  CHECK(ts.variant == TruncationVariant::submanager_scale);
  CHECK(ts.t_star == 3);
  TruncationScheme tw = parse_truncation("(T_w,1)");
  CHECK(tw.variant == TruncationVariant::worker_scale);
  CHECK(tw.t_star == 1);
  CHECK_THROWS_AS(parse_truncation("(T_x, 1)"), ConfigError);
  CHECK_THROWS_AS(parse_truncation("(T_w, -1)"), ConfigError);
  CHECK_THROWS_AS(parse_truncation("T_w 1"), ConfigError);
}

TEST_CASE("variant presets configure the baselines") {
  RunConfig ippo = parse_config("", {"variant=ippo"});
  CHECK(ippo.levels == 1);
  CHECK(ippo.rounds == 0);  // no message passing
  CHECK(ippo.actor_hidden == 128);
  CHECK(ippo.train.lr_actor == 5e-4);
  CHECK(ippo.train.grad_clip == 5.0);
  CHECK(ippo.train.episodes_per_update == 32);

  RunConfig flat = parse_config("", {"variant=gppo-flat"});
  CHECK(flat.levels == 1);
  CHECK(flat.rounds == 2);
  CHECK(flat.critic_hidden == 32);

  // a config can still re-tune a baseline after the preset applies
  RunConfig tuned = parse_config("", {"variant=ippo", "lr_actor=0.001"});
  CHECK(tuned.train.lr_actor == 0.001);
}

TEST_CASE("nv forces the no-value truncation scheme") {
  RunConfig cfg = parse_config("", {"nv=true", "truncation=(T_w, 1)"});
  CHECK(cfg.train.trunc.variant == TruncationVariant::none);
  CHECK(cfg.train.trunc.t_star == 0);
}

TEST_CASE("config hash is stable and sensitive") {
  RunConfig a = parse_config("", {});
  RunConfig b = parse_config("", {});
  CHECK(a.config_hash() == b.config_hash());
  RunConfig c = parse_config("", {"seed=1"});
  CHECK(a.config_hash() != c.config_hash());
}

TEST_CASE("variant model builders produce the advertised structure") {
  RunConfig cfg = parse_config("", {"variant=gppo-star", "embed_dim=8"});
  auto env = make_env(cfg);
  Rng rng(1);
  env->reset(rng);
  Model model = make_model(cfg, *env);
  CHECK(model.levels() == 1);
  GraphProvider gp(HierarchySpec{});
  HierGraph g = model.make_graph(gp, env->positions());
  CHECK(g.worker_adj[0] == std::vector<int>{1});  // 2-agent star

  RunConfig h3 = parse_config("", {"levels=3", "env=sampling", "preset=mini",
                                   "embed_dim=8", "dynamic=true"});
  auto env3 = make_env(h3);
  Model m3 = make_model(h3, *env3);
  CHECK(m3.levels() == 3);
  CHECK(m3.spec().hier.dynamic);
}

TEST_CASE("train runs with identical config and seed emit identical bytes") {
  std::vector<std::string> sets = {"budget=600", "epochs=2",
                                   "episodes_per_update=2", "embed_dim=8",
                                   "eval_episodes=1"};
  RunConfig a = parse_config("", sets);
  a.seed = 5;
  a.train.seed = 5;
  a.out_dir = "harness_run_a";
  RunConfig b = a;
  b.out_dir = "harness_run_b";
  REQUIRE(run_command("train", a) == 0);
  REQUIRE(run_command("train", b) == 0);
  CHECK(slurp("harness_run_a/episodes.csv") == slurp("harness_run_b/episodes.csv"));
  CHECK(slurp("harness_run_a/eval.csv") == slurp("harness_run_b/eval.csv"));
  CHECK(slurp("harness_run_a/config.txt") == slurp("harness_run_b/config.txt"));
  CHECK(slurp("harness_run_a/checkpoint_final.bin") ==
        slurp("harness_run_b/checkpoint_final.bin"));

  // header is the documented fixed schema
  std::ifstream in("harness_run_a/episodes.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == kEpisodeCsvHeader);

  fs::remove_all("harness_run_a");
  fs::remove_all("harness_run_b");
}

TEST_CASE("column count is invariant across variants") {
  auto count_cols = [](const std::string& dir,
                       const std::vector<std::string>& sets) {
    RunConfig cfg = parse_config("", sets);
    cfg.out_dir = dir;
    REQUIRE(run_command("train", cfg) == 0);
    std::ifstream in(dir + "/episodes.csv");
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    int commas = 0;
    for (char ch : line) commas += ch == ',';
    fs::remove_all(dir);
    return commas + 1;
  };
  std::vector<std::string> base = {"budget=300", "epochs=1",
                                   "episodes_per_update=1", "embed_dim=8",
                                   "eval_every=0"};
  auto with_variant = [&](const std::string& v) {
    auto sets = base;
    sets.push_back("variant=" + v);
    return sets;
  };
  int himppo = count_cols("harness_cols_a", base);
  int ippo = count_cols("harness_cols_b", with_variant("ippo"));
  int star = count_cols("harness_cols_c", with_variant("gppo-star"));
  CHECK(himppo == 11);
  CHECK(ippo == 11);
  CHECK(star == 11);
}

TEST_CASE("eval writes a replay with one record per step") {
  RunConfig cfg = parse_config(
      "", {"budget=300", "epochs=1", "episodes_per_update=1", "embed_dim=8",
           "eval_episodes=1"});
  cfg.out_dir = "harness_eval";
  REQUIRE(run_command("train", cfg) == 0);
  REQUIRE(run_command("eval", cfg) == 0);
  std::ifstream in("harness_eval/replay.jsonl");
  REQUIRE(in.good());
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lines;
    CHECK(line.find("\"step\"") != std::string::npos);
    CHECK(line.find("\"positions\"") != std::string::npos);
    CHECK(line.find("\"actions\"") != std::string::npos);
    CHECK(line.find("\"rewards\"") != std::string::npos);
  }
  CHECK(lines > 0);
  fs::remove_all("harness_eval");
}

TEST_CASE("verify subcommand exits cleanly") {
  RunConfig cfg = parse_config("", {});
  CHECK(run_command("verify", cfg) == 0);
  CHECK(run_command("bogus", cfg) == 2);
}
