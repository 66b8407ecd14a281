#pragma once

#include <optional>

#include "himpp/nn/tape.hpp"

namespace himpp {

enum class Activation { identity, relu, tanh };

// Grid-observation front end: valid padding, stride 1, flattened output.
struct ConvSpec {
  int in_channels = 1;
  int height = 0;
  int width = 0;
  int out_channels = 8;
  int kernel = 2;

  int out_dim() const {
    return out_channels * (height - kernel + 1) * (width - kernel + 1);
  }
};

struct NetSpec {
  std::vector<int> sizes;  // sizes[0] = input dim, sizes.back() = output dim
  Activation hidden_act = Activation::relu;
  Activation final_act = Activation::identity;
  std::optional<ConvSpec> conv;  // when set, sizes[0] must equal conv out_dim

  void validate() const;
};

// Feedforward net owning named parameters "<prefix>.W<i>" / "<prefix>.b<i>"
// (and "<prefix>.convW" / "<prefix>.convb" when a ConvSpec is present).
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::string prefix, NetSpec spec);

  void init(ParamStore& ps, Rng& rng);

  // Composable forward on an existing tape; input node must match sizes[0]
  // (or the raw conv input shape when a ConvSpec is present).
  int apply(Tape& tape, int x) const;

  Vec forward(ParamStore& ps, const Vec& input) const;
  // Accumulates parameter gradients in `ps` and returns the input gradient.
  Vec backward(ParamStore& ps, const Vec& input, const Vec& upstream) const;

  int in_dim() const;   // raw input dim (conv input when conv is set)
  int out_dim() const { return spec_.sizes.back(); }
  const std::string& prefix() const { return prefix_; }
  const NetSpec& spec() const { return spec_; }

 private:
  int activate(Tape& tape, int x, Activation a) const;

  std::string prefix_;
  NetSpec spec_;
};

}  // namespace himpp
