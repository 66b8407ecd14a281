#include "himpp/nn/tape.hpp"

namespace himpp {

int Tape::push(Vec val, std::function<void()> back) {
  Node n;
  n.val = std::move(val);
  n.grad.assign(n.val.size(), 0.0);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Tape::input(const Vec& x) { return push(x, {}); }

int Tape::zeros(int dim) {
  return push(Vec(static_cast<size_t>(dim), 0.0), {});
}

int Tape::linear(const std::string& w_name, const std::string& b_name, int x) {
  const Param& W = ps_.at(w_name);
  const Vec& in = value(x);
  HIMPP_CHECK(W.cols == static_cast<int>(in.size()),
              "linear layer " + w_name + " expects input of size " +
                  std::to_string(W.cols) + ", got " + std::to_string(in.size()));
  Vec out(static_cast<size_t>(W.rows), 0.0);
  for (int r = 0; r < W.rows; ++r) {
    const double* wrow = &W.value[static_cast<size_t>(r) * W.cols];
    double s = 0.0;
    for (int c = 0; c < W.cols; ++c) s += wrow[c] * in[static_cast<size_t>(c)];
    out[static_cast<size_t>(r)] = s;
  }
  if (!b_name.empty()) {
    const Param& B = ps_.at(b_name);
    HIMPP_CHECK(B.rows == W.rows, "bias shape for " + b_name);
    for (int r = 0; r < W.rows; ++r) out[static_cast<size_t>(r)] += B.value[static_cast<size_t>(r)];
  }
  int id = push(std::move(out), {});
  nodes_.back().back = [this, id, x, w_name, b_name] {
    Param& W2 = ps_.at(w_name);
    const Vec& up = g(id);
    const Vec& in2 = value(x);
    Vec& gin = g(x);
    for (int r = 0; r < W2.rows; ++r) {
      double u = up[static_cast<size_t>(r)];
      if (u == 0.0) continue;
      double* grow = &W2.grad[static_cast<size_t>(r) * W2.cols];
      const double* wrow = &W2.value[static_cast<size_t>(r) * W2.cols];
      for (int c = 0; c < W2.cols; ++c) {
        grow[c] += u * in2[static_cast<size_t>(c)];
        gin[static_cast<size_t>(c)] += u * wrow[c];
      }
    }
    if (!b_name.empty()) {
      Param& B2 = ps_.at(b_name);
      for (int r = 0; r < B2.rows; ++r) B2.grad[static_cast<size_t>(r)] += up[static_cast<size_t>(r)];
    }
  };
  return id;
}

int Tape::relu(int x) {
  Vec out = value(x);
  for (double& v : out) v = v > 0.0 ? v : 0.0;
  int id = push(std::move(out), {});
  nodes_.back().back = [this, id, x] {
    const Vec& up = g(id);
    const Vec& in = value(x);
    Vec& gin = g(x);
    for (size_t i = 0; i < up.size(); ++i)
      if (in[i] > 0.0) gin[i] += up[i];
  };
  return id;
}

int Tape::tanh_node(int x) {
  Vec out = value(x);
  for (double& v : out) v = std::tanh(v);
  int id = push(std::move(out), {});
  nodes_.back().back = [this, id, x] {
    const Vec& up = g(id);
    const Vec& y = value(id);
    Vec& gin = g(x);
    for (size_t i = 0; i < up.size(); ++i) gin[i] += up[i] * (1.0 - y[i] * y[i]);
  };
  return id;
}

int Tape::concat(const std::vector<int>& xs) {
  Vec out;
  for (int x : xs) {
    const Vec& v = value(x);
    out.insert(out.end(), v.begin(), v.end());
  }
  int id = push(std::move(out), {});
  nodes_.back().back = [this, id, xs] {
    const Vec& up = g(id);
    size_t off = 0;
    for (int x : xs) {
      Vec& gin = g(x);
      for (size_t i = 0; i < gin.size(); ++i) gin[i] += up[off + i];
      off += gin.size();
    }
  };
  return id;
}

int Tape::mean(const std::vector<int>& xs, int dim) {
  if (xs.empty()) return zeros(dim);
  Vec out(static_cast<size_t>(dim), 0.0);
  for (int x : xs) {
    const Vec& v = value(x);
    HIMPP_CHECK(static_cast<int>(v.size()) == dim, "mean over mixed dimensions");
    for (int i = 0; i < dim; ++i) out[static_cast<size_t>(i)] += v[static_cast<size_t>(i)];
  }
  double inv = 1.0 / static_cast<double>(xs.size());
  for (double& v : out) v *= inv;
  int id = push(std::move(out), {});
  nodes_.back().back = [this, id, xs, inv] {
    const Vec& up = g(id);
    for (int x : xs) {
      Vec& gin = g(x);
      for (size_t i = 0; i < up.size(); ++i) gin[i] += inv * up[i];
    }
  };
  return id;
}

int Tape::add(int a, int b) {
  const Vec& va = value(a);
  const Vec& vb = value(b);
  HIMPP_CHECK(va.size() == vb.size(), "add dimension mismatch");
  Vec out(va.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = va[i] + vb[i];
  int id = push(std::move(out), {});
  nodes_.back().back = [this, id, a, b] {
    const Vec& up = g(id);
    Vec& ga = g(a);
    Vec& gb = g(b);
    for (size_t i = 0; i < up.size(); ++i) {
      ga[i] += up[i];
      gb[i] += up[i];
    }
  };
  return id;
}

int Tape::scale(int x, double c) {
  Vec out = value(x);
  for (double& v : out) v *= c;
  int id = push(std::move(out), {});
  nodes_.back().back = [this, id, x, c] {
    const Vec& up = g(id);
    Vec& gin = g(x);
    for (size_t i = 0; i < up.size(); ++i) gin[i] += c * up[i];
  };
  return id;
}

int Tape::conv2d(const std::string& w_name, const std::string& b_name, int x,
                 int in_ch, int h, int w, int out_ch, int k) {
  const Param& W = ps_.at(w_name);
  const Vec& in = value(x);
  HIMPP_CHECK(static_cast<int>(in.size()) == in_ch * h * w,
              "conv2d input shape for " + w_name);
  HIMPP_CHECK(W.rows == out_ch && W.cols == in_ch * k * k,
              "conv2d weight shape for " + w_name);
  HIMPP_CHECK(h >= k && w >= k, "conv2d kernel larger than input");
  const int oh = h - k + 1;
  const int ow = w - k + 1;
  const Param& B = ps_.at(b_name);
  Vec out(static_cast<size_t>(out_ch) * oh * ow, 0.0);
  for (int o = 0; o < out_ch; ++o) {
    const double* wslab = &W.value[static_cast<size_t>(o) * W.cols];
    for (int y = 0; y < oh; ++y)
      for (int xx = 0; xx < ow; ++xx) {
        double s = B.value[static_cast<size_t>(o)];
        int wi = 0;
        for (int c = 0; c < in_ch; ++c)
          for (int dy = 0; dy < k; ++dy)
            for (int dx = 0; dx < k; ++dx)
              s += wslab[wi++] *
                   in[static_cast<size_t>((c * h + y + dy) * w + xx + dx)];
        out[static_cast<size_t>((o * oh + y) * ow + xx)] = s;
      }
  }
  int id = push(std::move(out), {});
  nodes_.back().back = [this, id, x, w_name, b_name, in_ch, h, w, out_ch, k, oh, ow] {
    Param& W2 = ps_.at(w_name);
    Param& B2 = ps_.at(b_name);
    const Vec& up = g(id);
    const Vec& in2 = value(x);
    Vec& gin = g(x);
    for (int o = 0; o < out_ch; ++o) {
      double* gslab = &W2.grad[static_cast<size_t>(o) * W2.cols];
      const double* wslab = &W2.value[static_cast<size_t>(o) * W2.cols];
      for (int y = 0; y < oh; ++y)
        for (int xx = 0; xx < ow; ++xx) {
          double u = up[static_cast<size_t>((o * oh + y) * ow + xx)];
          if (u == 0.0) continue;
          B2.grad[static_cast<size_t>(o)] += u;
          int wi = 0;
          for (int c = 0; c < in_ch; ++c)
            for (int dy = 0; dy < k; ++dy)
              for (int dx = 0; dx < k; ++dx) {
                size_t ii = static_cast<size_t>((c * h + y + dy) * w + xx + dx);
                gslab[wi] += u * in2[ii];
                gin[ii] += u * wslab[wi];
                ++wi;
              }
        }
    }
  };
  return id;
}

void Tape::backward(const std::vector<std::pair<int, Vec>>& seeds) {
  for (auto& n : nodes_) std::fill(n.grad.begin(), n.grad.end(), 0.0);
  for (const auto& [id, up] : seeds) {
    Vec& gr = g(id);
    HIMPP_CHECK(up.size() == gr.size(), "backward seed dimension mismatch");
    for (size_t i = 0; i < up.size(); ++i) gr[i] += up[i];
  }
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    Node& n = nodes_[static_cast<size_t>(i)];
    if (n.back) n.back();
  }
}

}  // namespace himpp
