#include "himpp/nn/net.hpp"

#include <cmath>

namespace himpp {

void NetSpec::validate() const {
  HIMPP_CHECK(!sizes.empty(), "NetSpec needs at least one layer size");
  for (int s : sizes) HIMPP_CHECK(s > 0, "NetSpec sizes must be positive");
  if (conv) {
    HIMPP_CHECK(conv->out_channels > 0 && conv->kernel > 0, "conv spec");
    HIMPP_CHECK(conv->height >= conv->kernel && conv->width >= conv->kernel,
                "conv kernel exceeds grid");
    HIMPP_CHECK(sizes[0] == conv->out_dim(),
                "NetSpec sizes[0] must match flattened conv output");
  }
}

Mlp::Mlp(std::string prefix, NetSpec spec)
    : prefix_(std::move(prefix)), spec_(std::move(spec)) {
  spec_.validate();
  HIMPP_CHECK(spec_.sizes.size() >= 2, "Mlp needs input and output sizes");
}

int Mlp::in_dim() const {
  if (spec_.conv)
    return spec_.conv->in_channels * spec_.conv->height * spec_.conv->width;
  return spec_.sizes[0];
}

void Mlp::init(ParamStore& ps, Rng& rng) {
  if (spec_.conv) {
    const ConvSpec& c = *spec_.conv;
    int fan_in = c.in_channels * c.kernel * c.kernel;
    ps.add_matrix(prefix_ + ".convW", c.out_channels, fan_in, rng);
    ps.add_vector(prefix_ + ".convb", c.out_channels, rng,
                  1.0 / std::sqrt(static_cast<double>(fan_in)));
  }
  for (size_t i = 0; i + 1 < spec_.sizes.size(); ++i) {
    ps.add_matrix(prefix_ + ".W" + std::to_string(i), spec_.sizes[i + 1],
                  spec_.sizes[i], rng);
    ps.add_vector(prefix_ + ".b" + std::to_string(i), spec_.sizes[i + 1], rng,
                  1.0 / std::sqrt(static_cast<double>(spec_.sizes[i])));
  }
}

int Mlp::activate(Tape& tape, int x, Activation a) const {
  switch (a) {
    case Activation::identity: return x;
    case Activation::relu: return tape.relu(x);
    case Activation::tanh: return tape.tanh_node(x);
  }
  return x;
}

int Mlp::apply(Tape& tape, int x) const {
  if (spec_.conv) {
    const ConvSpec& c = *spec_.conv;
    x = tape.conv2d(prefix_ + ".convW", prefix_ + ".convb", x, c.in_channels,
                    c.height, c.width, c.out_channels, c.kernel);
    x = activate(tape, x, spec_.hidden_act);
  }
  size_t last = spec_.sizes.size() - 2;
  for (size_t i = 0; i + 1 < spec_.sizes.size(); ++i) {
    x = tape.linear(prefix_ + ".W" + std::to_string(i),
                    prefix_ + ".b" + std::to_string(i), x);
    x = activate(tape, x, i == last ? spec_.final_act : spec_.hidden_act);
  }
  return x;
}

Vec Mlp::forward(ParamStore& ps, const Vec& input) const {
  Tape tape(ps);
  return tape.value(apply(tape, tape.input(input)));
}

Vec Mlp::backward(ParamStore& ps, const Vec& input, const Vec& upstream) const {
  Tape tape(ps);
  int in = tape.input(input);
  int out = apply(tape, in);
  tape.backward({{out, upstream}});
  return tape.grad(in);
}

}  // namespace himpp
