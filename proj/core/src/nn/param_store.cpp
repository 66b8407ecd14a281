#include "himpp/nn/param_store.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace himpp {

Param& ParamStore::add_matrix(const std::string& name, int rows, int cols,
                              Rng& rng) {
  HIMPP_CHECK(rows > 0 && cols > 0, "matrix dims for " + name);
  HIMPP_CHECK(!contains(name), "duplicate parameter " + name);
  Param p;
  p.rows = rows;
  p.cols = cols;
  double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  p.value.resize(static_cast<size_t>(rows) * cols);
  for (double& w : p.value) w = rng.uniform(-bound, bound);
  p.grad.assign(p.value.size(), 0.0);
  p.m.assign(p.value.size(), 0.0);
  p.v.assign(p.value.size(), 0.0);
  return params_.emplace(name, std::move(p)).first->second;
}

Param& ParamStore::add_vector(const std::string& name, int len, Rng& rng,
                              double bound) {
  Param& p = add_vector(name, len, 0.0);
  for (double& w : p.value) w = rng.uniform(-bound, bound);
  return p;
}

Param& ParamStore::add_vector(const std::string& name, int len, double fill) {
  HIMPP_CHECK(len > 0, "vector length for " + name);
  HIMPP_CHECK(!contains(name), "duplicate parameter " + name);
  Param p;
  p.rows = len;
  p.cols = 0;
  p.value.assign(len, fill);
  p.grad.assign(len, 0.0);
  p.m.assign(len, 0.0);
  p.v.assign(len, 0.0);
  return params_.emplace(name, std::move(p)).first->second;
}

Param& ParamStore::at(const std::string& name) {
  auto it = params_.find(name);
  HIMPP_CHECK(it != params_.end(), "unknown parameter " + name);
  return it->second;
}

const Param& ParamStore::at(const std::string& name) const {
  auto it = params_.find(name);
  HIMPP_CHECK(it != params_.end(), "unknown parameter " + name);
  return it->second;
}

void ParamStore::zero_grad() {
  for (auto& [name, p] : params_) std::fill(p.grad.begin(), p.grad.end(), 0.0);
}

void ParamStore::adam_update_param(const std::string& name, Param& p, double lr,
                                   double beta1, double beta2, double eps,
                                   long t) {
  for (size_t i = 0; i < p.value.size(); ++i) {
    double g = p.grad[i];
    if (!std::isfinite(g))
      throw StructuralError("non-finite gradient in parameter " + name);
    p.m[i] = beta1 * p.m[i] + (1.0 - beta1) * g;
    p.v[i] = beta2 * p.v[i] + (1.0 - beta2) * g * g;
    double mhat = p.m[i] / (1.0 - std::pow(beta1, static_cast<double>(t)));
    double vhat = p.v[i] / (1.0 - std::pow(beta2, static_cast<double>(t)));
    p.value[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    p.grad[i] = 0.0;
  }
  p.steps = t;
}

void ParamStore::adam_step(double lr, double beta1, double beta2, double eps) {
  for (auto& [name, p] : params_)
    adam_update_param(name, p, lr, beta1, beta2, eps, p.steps + 1);
  ++step_;
}

void ParamStore::adam_step_prefixed(const std::vector<std::string>& prefixes,
                                    double lr, double beta1, double beta2,
                                    double eps) {
  for (auto& [name, p] : params_) {
    bool hit = false;
    for (const auto& pre : prefixes)
      if (name.rfind(pre, 0) == 0) { hit = true; break; }
    if (hit) adam_update_param(name, p, lr, beta1, beta2, eps, p.steps + 1);
  }
  ++step_;
}

void ParamStore::gradient_clip(double lo, double hi) {
  HIMPP_CHECK(lo < hi, "gradient_clip range");
  for (auto& [name, p] : params_)
    for (double& g : p.grad) g = std::min(hi, std::max(lo, g));
}

namespace {
constexpr uint32_t kMagic = 0x48500001;  // "HP" + format version 1
}

void ParamStore::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  HIMPP_CHECK(out.good(), "cannot open checkpoint for writing: " + path);
  auto put_u32 = [&](uint32_t x) { out.write(reinterpret_cast<const char*>(&x), 4); };
  auto put_i64 = [&](int64_t x) { out.write(reinterpret_cast<const char*>(&x), 8); };
  auto put_vec = [&](const Vec& v) {
    put_i64(static_cast<int64_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  put_u32(kMagic);
  put_i64(step_);
  put_i64(static_cast<int64_t>(params_.size()));
  for (const auto& [name, p] : params_) {
    put_i64(static_cast<int64_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(static_cast<uint32_t>(p.rows));
    put_u32(static_cast<uint32_t>(p.cols));
    put_i64(p.steps);
    put_vec(p.value);
    put_vec(p.m);
    put_vec(p.v);
  }
}

void ParamStore::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  HIMPP_CHECK(in.good(), "cannot open checkpoint: " + path);
  auto get_u32 = [&] { uint32_t x; in.read(reinterpret_cast<char*>(&x), 4); return x; };
  auto get_i64 = [&] { int64_t x; in.read(reinterpret_cast<char*>(&x), 8); return x; };
  auto get_vec = [&] {
    Vec v(static_cast<size_t>(get_i64()));
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    return v;
  };
  HIMPP_CHECK(get_u32() == kMagic, "bad checkpoint magic/version: " + path);
  step_ = get_i64();
  int64_t n = get_i64();
  params_.clear();
  for (int64_t i = 0; i < n; ++i) {
    std::string name(static_cast<size_t>(get_i64()), '\0');
    in.read(name.data(), static_cast<std::streamsize>(name.size()));
    Param p;
    p.rows = static_cast<int>(get_u32());
    p.cols = static_cast<int>(get_u32());
    p.steps = get_i64();
    p.value = get_vec();
    p.m = get_vec();
    p.v = get_vec();
    p.grad.assign(p.value.size(), 0.0);
    params_.emplace(std::move(name), std::move(p));
  }
  HIMPP_CHECK(in.good(), "truncated checkpoint: " + path);
}

}  // namespace himpp
