#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace himpp {

using Vec = std::vector<double>;

// Thrown on contract violations (shape mismatches, bad configs, scheduler bugs).
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {
inline void check_fail(const char* expr, const std::string& msg) {
  std::ostringstream os;
  os << "check failed: " << expr;
  if (!msg.empty()) os << " (" << msg << ")";
  throw StructuralError(os.str());
}
}  // namespace detail

#define HIMPP_CHECK(cond, msg)                             \
  do {                                                     \
    if (!(cond)) ::himpp::detail::check_fail(#cond, (msg)); \
  } while (0)

// Deterministic random stream. One instance per environment / per purpose so
// runs with the same seed replay bit-identically.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(gen_);
  }
  double normal() {
    // Explicit Box-Muller keeps the draw count platform-independent.
    double u1 = uniform_unit();
    double u2 = uniform_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    std::uniform_int_distribution<int> d(lo, hi);
    return d(gen_);
  }
  // Sample an index from unnormalized non-negative weights.
  int categorical(const Vec& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform_unit() * total;
    double acc = 0.0;
    for (size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }
  uint64_t next_u64() { return gen_(); }

 private:
  double uniform_unit() {
    // in (0, 1]; avoids log(0) in Box-Muller
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }
  std::mt19937_64 gen_;
};

inline bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace himpp
