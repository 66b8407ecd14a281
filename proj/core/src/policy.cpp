#include "himpp/policy.hpp"

#include <algorithm>

namespace himpp {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // ln(2*pi)
}

Vec softmax(const Vec& logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  Vec p(logits.size());
  double z = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

PolicyHead::PolicyHead(std::string prefix, HeadKind kind, int obs_dim,
                       int out_dim, std::vector<int> mean_hidden,
                       std::vector<int> value_hidden)
    : prefix_(std::move(prefix)), kind_(kind), obs_dim_(obs_dim),
      out_dim_(out_dim) {
  NetSpec mean;
  mean.sizes.push_back(obs_dim);
  for (int h : mean_hidden) mean.sizes.push_back(h);
  mean.sizes.push_back(out_dim);
  mean_ = Mlp(prefix_ + ".actor.mean", mean);

  NetSpec value;
  value.sizes.push_back(obs_dim);
  for (int h : value_hidden) value.sizes.push_back(h);
  value.sizes.push_back(1);
  value_ = Mlp(prefix_ + ".critic.v", value);
}

void PolicyHead::init(ParamStore& ps, Rng& rng) {
  mean_.init(ps, rng);
  value_.init(ps, rng);
}

ActOut PolicyHead::act(Tape& tape, int obs, double sigma, Rng& rng) const {
  const Vec& mean = tape.value(mean_node(tape, obs));
  ActOut out;
  if (kind_ == HeadKind::gaussian) {
    out.sample.resize(mean.size());
    for (size_t i = 0; i < mean.size(); ++i)
      out.sample[i] = mean[i] + sigma * rng.normal();
  } else {
    Vec p = softmax(mean);
    out.sample = {static_cast<double>(rng.categorical(p))};
  }
  out.log_prob = log_prob(mean, out.sample, sigma);
  out.value = tape.value(value_node(tape, obs))[0];
  return out;
}

ActOut PolicyHead::act_greedy(Tape& tape, int obs) const {
  const Vec& mean = tape.value(mean_node(tape, obs));
  ActOut out;
  if (kind_ == HeadKind::gaussian) {
    out.sample = mean;
  } else {
    auto it = std::max_element(mean.begin(), mean.end());
    out.sample = {static_cast<double>(it - mean.begin())};
  }
  out.log_prob = log_prob(mean, out.sample, kind_ == HeadKind::gaussian ? 1.0 : 0.0);
  out.value = tape.value(value_node(tape, obs))[0];
  return out;
}

double PolicyHead::log_prob(const Vec& mean_or_logits, const Vec& sample,
                            double sigma) const {
  if (kind_ == HeadKind::gaussian) {
    HIMPP_CHECK(sample.size() == mean_or_logits.size(), "sample dimension");
    double lp = 0.0;
    for (size_t i = 0; i < sample.size(); ++i) {
      double z = (sample[i] - mean_or_logits[i]) / sigma;
      lp += -0.5 * z * z - std::log(sigma) - 0.5 * kLog2Pi;
    }
    return lp;
  }
  Vec p = softmax(mean_or_logits);
  int a = static_cast<int>(sample[0]);
  HIMPP_CHECK(a >= 0 && a < static_cast<int>(p.size()), "sample outside support");
  return std::log(p[static_cast<size_t>(a)]);
}

double PolicyHead::entropy(const Vec& mean_or_logits, double sigma) const {
  if (kind_ == HeadKind::gaussian) {
    double d = static_cast<double>(mean_or_logits.size());
    return d * (0.5 + 0.5 * kLog2Pi + std::log(sigma));
  }
  Vec p = softmax(mean_or_logits);
  double h = 0.0;
  for (double pi : p)
    if (pi > 0.0) h -= pi * std::log(pi);
  return h;
}

Vec PolicyHead::dlogp(const Vec& mean_or_logits, const Vec& sample,
                      double sigma) const {
  Vec g(mean_or_logits.size(), 0.0);
  if (kind_ == HeadKind::gaussian) {
    for (size_t i = 0; i < g.size(); ++i)
      g[i] = (sample[i] - mean_or_logits[i]) / (sigma * sigma);
    return g;
  }
  Vec p = softmax(mean_or_logits);
  int a = static_cast<int>(sample[0]);
  for (size_t i = 0; i < g.size(); ++i)
    g[i] = (static_cast<int>(i) == a ? 1.0 : 0.0) - p[i];
  return g;
}

Vec PolicyHead::dentropy(const Vec& mean_or_logits, double sigma) const {
  Vec g(mean_or_logits.size(), 0.0);
  if (kind_ == HeadKind::gaussian) return g;  // scheduled sigma: constant
  Vec p = softmax(mean_or_logits);
  double h = entropy(mean_or_logits, sigma);
  // dH/dz_i = -p_i * (log p_i + H)
  for (size_t i = 0; i < g.size(); ++i) {
    double lp = p[i] > 0.0 ? std::log(p[i]) : 0.0;
    g[i] = -p[i] * (lp + h);
  }
  return g;
}

}  // namespace himpp
