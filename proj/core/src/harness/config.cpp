#include "himpp/harness/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace himpp {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  }
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

const char* kVariants[] = {"himppo",        "ippo",      "gppo-flat",
                           "gppo-star",     "gppo-complete",
                           "gppo-path",     "gppo-cycle"};

bool known_variant(const std::string& v) {
  for (const char* k : kVariants)
    if (v == k) return true;
  return false;
}

// Keys that only make sense for the hierarchical variant.
bool hierarchy_key(const std::string& k) {
  return k == "levels" || k == "alpha" || k == "K" || k == "dynamic" ||
         k == "truncation" || k == "fl" || k == "nl" || k == "er" || k == "nv";
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& val) {
  if (key == "env") {
    if (val != "lbfws" && val != "sampling")
      throw ConfigError("key 'env': unknown environment '" + val + "'");
    cfg.env = val;
  } else if (key == "preset") {
    cfg.preset = val;
  } else if (key == "variant") {
    if (!known_variant(val))
      throw ConfigError("key 'variant': unknown variant '" + val + "'");
    cfg.variant = val;
  } else if (key == "levels") {
    cfg.levels = static_cast<int>(parse_long(key, val));
    if (cfg.levels != 2 && cfg.levels != 3)
      throw ConfigError("key 'levels': must be 2 or 3");
  } else if (key == "alpha") {
    cfg.alpha = static_cast<int>(parse_long(key, val));
  } else if (key == "K") {
    cfg.K = static_cast<int>(parse_long(key, val));
  } else if (key == "dynamic") {
    cfg.dynamic = parse_bool(key, val);
  } else if (key == "fl") {
    cfg.fl = parse_bool(key, val);
  } else if (key == "nl") {
    cfg.nl = parse_bool(key, val);
  } else if (key == "er") {
    cfg.er = parse_bool(key, val);
  } else if (key == "nv") {
    cfg.nv = parse_bool(key, val);
  } else if (key == "truncation") {
    parse_truncation(val);  // validates
    cfg.truncation = val;
  } else if (key == "embed_dim") {
    cfg.embed_dim = static_cast<int>(parse_long(key, val));
  } else if (key == "rounds") {
    cfg.rounds = static_cast<int>(parse_long(key, val));
  } else if (key == "msg") {
    if (val != "mlp" && val != "gcn")
      throw ConfigError("key 'msg': expected mlp or gcn");
    cfg.msg = val;
  } else if (key == "actor_hidden") {
    cfg.actor_hidden = static_cast<int>(parse_long(key, val));
  } else if (key == "critic_hidden") {
    cfg.critic_hidden = static_cast<int>(parse_long(key, val));
  } else if (key == "gamma") {
    cfg.train.gamma = parse_double(key, val);
  } else if (key == "lambda") {
    cfg.train.lam_worker = parse_double(key, val);
  } else if (key == "clip") {
    cfg.train.clip = parse_double(key, val);
  } else if (key == "ent_coef") {
    cfg.train.ent_coef = parse_double(key, val);
  } else if (key == "value_coef") {
    cfg.train.value_coef = parse_double(key, val);
  } else if (key == "epochs") {
    cfg.train.epochs = static_cast<int>(parse_long(key, val));
  } else if (key == "minibatch") {
    cfg.train.minibatch = static_cast<int>(parse_long(key, val));
  } else if (key == "episodes_per_update") {
    cfg.train.episodes_per_update = static_cast<int>(parse_long(key, val));
  } else if (key == "lr_actor") {
    cfg.train.lr_actor = parse_double(key, val);
  } else if (key == "lr_critic") {
    cfg.train.lr_critic = parse_double(key, val);
  } else if (key == "grad_clip") {
    cfg.train.grad_clip = parse_double(key, val);
  } else if (key == "sigma_init") {
    cfg.train.sigma.initial = parse_double(key, val);
  } else if (key == "sigma_decay") {
    cfg.train.sigma.decay = parse_double(key, val);
  } else if (key == "sigma_decay_every") {
    cfg.train.sigma.decay_every = parse_long(key, val);
  } else if (key == "sigma_floor") {
    cfg.train.sigma.floor = parse_double(key, val);
  } else if (key == "budget") {
    cfg.budget = parse_long(key, val);
  } else if (key == "eval_every") {
    cfg.eval_every = static_cast<int>(parse_long(key, val));
  } else if (key == "eval_episodes") {
    cfg.eval_episodes = static_cast<int>(parse_long(key, val));
  } else if (key == "checkpoint_every") {
    cfg.checkpoint_every = static_cast<int>(parse_long(key, val));
  } else if (key == "seed") {
    cfg.seed = static_cast<uint64_t>(parse_long(key, val));
  } else if (key == "out") {
    cfg.out_dir = val;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

// Baseline presets. Applied before file keys so configs can still re-tune.
void apply_variant_defaults(RunConfig& cfg) {
  if (cfg.variant == "himppo") return;
  cfg.train.episodes_per_update = 32;
  cfg.train.grad_clip = 5.0;
  if (cfg.variant == "ippo") {
    cfg.rounds = 0;
    cfg.actor_hidden = 128;
    cfg.critic_hidden = 64;
    cfg.train.lr_actor = 5e-4;
    cfg.train.lr_critic = 1e-5;
  } else {
    cfg.rounds = 2;
    cfg.actor_hidden = 64;
    cfg.critic_hidden = 32;
    cfg.train.lr_actor = 1e-4;
    cfg.train.lr_critic = 1e-4;
  }
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

TruncationScheme parse_truncation(const std::string& text) {
  std::string t = trim(text);
  if (t == "none") return {TruncationVariant::none, 0};
  // accepted shape: (T_s, n) or (T_w, n)
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')') {
    std::string inner = t.substr(1, t.size() - 2);
    size_t comma = inner.find(',');
    if (comma != std::string::npos) {
      std::string scale = trim(inner.substr(0, comma));
      std::string step = trim(inner.substr(comma + 1));
      long t_star = parse_long("truncation", step);
      if (t_star < 0) throw ConfigError("truncation step must be >= 0");
      if (scale == "T_s")
        return {TruncationVariant::submanager_scale, static_cast<int>(t_star)};
      if (scale == "T_w")
        return {TruncationVariant::worker_scale, static_cast<int>(t_star)};
    }
  }
  throw ConfigError("key 'truncation': expected none, (T_s, n) or (T_w, n), got '" +
                    text + "'");
}

RunConfig parse_config(const std::string& path,
                       const std::vector<std::string>& overrides) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(path + ":" + std::to_string(lineno) +
                          ": expected key = value");
      pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }
  for (const std::string& ov : overrides) {
    size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override '" + ov + "': expected key=value");
    pairs.emplace_back(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }

  // Variant first (last mention wins), then its defaults, then everything.
  RunConfig cfg;
  std::string hier_key;
  for (const auto& [k, v] : pairs) {
    if (k == "variant") set_key(cfg, k, v);
    if (hierarchy_key(k) && hier_key.empty()) hier_key = k;
  }
  if (cfg.variant != "himppo" && !hier_key.empty())
    throw ConfigError("conflicting keys 'variant' (" + cfg.variant + ") and '" +
                      hier_key + "': hierarchy settings need variant=himppo");
  apply_variant_defaults(cfg);
  for (const auto& [k, v] : pairs)
    if (k != "variant") set_key(cfg, k, v);
  return finalize(cfg);
}

RunConfig finalize(RunConfig cfg) {
  if (cfg.nv) cfg.truncation = "none";
  if (cfg.variant != "himppo") cfg.levels = 1;
  cfg.train.flags = RewardFlags{cfg.fl, cfg.nl, cfg.er};
  cfg.train.trunc = parse_truncation(cfg.truncation);
  cfg.train.seed = cfg.seed;
  // desk-scale sigma schedule: reach the floor across the budget
  if (cfg.train.sigma.decay_every == 250000 && cfg.budget < 2000000)
    cfg.train.sigma.decay_every = std::max(1l, cfg.budget / 8);
  if (cfg.alpha < 1 || cfg.K < 1)
    throw ConfigError("alpha and K must be >= 1");
  if (cfg.budget < 0) throw ConfigError("budget must be >= 0");
  return cfg;
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  auto put = [&](const char* k, const std::string& v) { out.emplace_back(k, v); };
  put("env", env);
  put("preset", preset);
  put("variant", variant);
  put("levels", std::to_string(levels));
  put("alpha", std::to_string(alpha));
  put("K", std::to_string(K));
  put("dynamic", dynamic ? "true" : "false");
  put("fl", fl ? "true" : "false");
  put("nl", nl ? "true" : "false");
  put("er", er ? "true" : "false");
  put("nv", nv ? "true" : "false");
  put("truncation", truncation);
  put("embed_dim", std::to_string(embed_dim));
  put("rounds", std::to_string(rounds));
  put("msg", msg);
  put("actor_hidden", std::to_string(actor_hidden));
  put("critic_hidden", std::to_string(critic_hidden));
  put("gamma", fmt_double(train.gamma));
  put("lambda", fmt_double(train.lam_worker));
  put("clip", fmt_double(train.clip));
  put("ent_coef", fmt_double(train.ent_coef));
  put("value_coef", fmt_double(train.value_coef));
  put("epochs", std::to_string(train.epochs));
  put("minibatch", std::to_string(train.minibatch));
  put("episodes_per_update", std::to_string(train.episodes_per_update));
  put("lr_actor", fmt_double(train.lr_actor));
  put("lr_critic", fmt_double(train.lr_critic));
  put("grad_clip", fmt_double(train.grad_clip));
  put("sigma_init", fmt_double(train.sigma.initial));
  put("sigma_decay", fmt_double(train.sigma.decay));
  put("sigma_decay_every", std::to_string(train.sigma.decay_every));
  put("sigma_floor", fmt_double(train.sigma.floor));
  put("budget", std::to_string(budget));
  put("eval_every", std::to_string(eval_every));
  put("eval_episodes", std::to_string(eval_episodes));
  put("checkpoint_every", std::to_string(checkpoint_every));
  put("seed", std::to_string(seed));
  return out;
}

std::string RunConfig::resolved_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : resolved()) os << k << " = " << v << "\n";
  return os.str();
}

uint64_t RunConfig::config_hash() const {
  // FNV-1a over the resolved text
  uint64_t h = 1469598103934665603ull;
  for (char c : resolved_text()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace himpp
