#pragma once

#include <functional>
#include <utility>

#include "himpp/nn/param_store.hpp"

namespace himpp {

// Reverse-mode tape over vector-valued nodes. Covers exactly the layer types
// the policies are built from: affine maps, ReLU/tanh, concatenation, mean
// aggregation (with the empty-set => zero-vector convention) and a valid-
// padding 2D convolution. Parameter gradients accumulate additively into the
// backing ParamStore, so repeated backward passes sum their contributions.
class Tape {
 public:
  explicit Tape(ParamStore& ps) : ps_(ps) {}

  int input(const Vec& x);
  int zeros(int dim);
  // y = W x (+ bias); pass an empty bias name to skip it.
  int linear(const std::string& w_name, const std::string& b_name, int x);
  int relu(int x);
  int tanh_node(int x);
  int concat(const std::vector<int>& xs);
  // Mean of same-dimension nodes; empty list yields the zero vector of `dim`.
  int mean(const std::vector<int>& xs, int dim);
  int add(int a, int b);
  int scale(int x, double c);
  // Input laid out channel-major (in_ch x h x w); valid padding, stride 1.
  // Weight shape: (out_ch) x (in_ch * k * k), bias length out_ch.
  int conv2d(const std::string& w_name, const std::string& b_name, int x,
             int in_ch, int h, int w, int out_ch, int k);

  const Vec& value(int id) const { return nodes_[static_cast<size_t>(id)].val; }
  int dim(int id) const { return static_cast<int>(value(id).size()); }

  // Single reverse sweep from the seeded nodes; node gradients are reset at
  // entry, parameter gradients in the store are NOT (they accumulate).
  void backward(const std::vector<std::pair<int, Vec>>& seeds);

  // Gradient w.r.t. a leaf input, valid after backward().
  const Vec& grad(int id) const { return nodes_[static_cast<size_t>(id)].grad; }

 private:
  struct Node {
    Vec val;
    Vec grad;
    std::function<void()> back;  // empty for leaves
  };

  int push(Vec val, std::function<void()> back);
  Vec& g(int id) { return nodes_[static_cast<size_t>(id)].grad; }

  ParamStore& ps_;
  std::vector<Node> nodes_;
};

}  // namespace himpp
