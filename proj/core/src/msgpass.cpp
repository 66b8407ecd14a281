#include "himpp/msgpass.hpp"

namespace himpp {

LatentModel::LatentModel(std::string prefix, LatentConfig cfg)
    : prefix_(std::move(prefix)), cfg_(cfg) {
  const int d = cfg_.embed_dim;
  HIMPP_CHECK(d > 0 && cfg_.rounds >= 0, "latent config");
  if (cfg_.grid_obs) {
    NetSpec enc;
    enc.conv = cfg_.conv;
    enc.sizes = {cfg_.conv.out_dim(), d};
    enc_ = Mlp(prefix_ + ".w.enc", enc);
    HIMPP_CHECK(cfg_.aux_dim > 0, "grid observations carry an auxiliary vector");
    enc_aux_ = Mlp(prefix_ + ".w.encaux", NetSpec{{cfg_.aux_dim, d}});
  } else {
    HIMPP_CHECK(cfg_.vec_obs_dim > 0, "vector observation dim");
    NetSpec enc{{cfg_.vec_obs_dim, d}};
    enc.final_act = Activation::relu;
    enc_ = Mlp(prefix_ + ".w.enc", enc);
  }
  if (cfg_.worker_msg == MsgKind::mlp)
    w_msg_ = Mlp(prefix_ + ".w.msg", NetSpec{{2 * d, cfg_.msg_hidden, d}});
  else
    w_msg_ = Mlp(prefix_ + ".w.msg", NetSpec{{d, d}});
  NetSpec up{{2 * d, d}};
  up.final_act = Activation::relu;
  w_up_ = Mlp(prefix_ + ".w.up", up);
  if (cfg_.levels == 3) {
    NetSpec sinit{{d + kNumQuadrants, d}};
    sinit.final_act = Activation::relu;
    s_init_ = Mlp(prefix_ + ".s.init", sinit);
    s_msg_ = Mlp(prefix_ + ".s.msg", NetSpec{{2 * d, cfg_.msg_hidden, d}});
    s_up_ = Mlp(prefix_ + ".s.up", up);
  }
  if (cfg_.levels >= 2) {
    NetSpec minit{{d, d}};
    minit.final_act = Activation::relu;
    m_init_ = Mlp(prefix_ + ".m.init", minit);
  }
}

void LatentModel::init(ParamStore& ps, Rng& rng) {
  enc_.init(ps, rng);
  if (cfg_.grid_obs) enc_aux_.init(ps, rng);
  w_msg_.init(ps, rng);
  w_up_.init(ps, rng);
  if (cfg_.levels == 3) {
    s_init_.init(ps, rng);
    s_msg_.init(ps, rng);
    s_up_.init(ps, rng);
  }
  if (cfg_.levels >= 2) m_init_.init(ps, rng);
}

int LatentModel::encode_worker(Tape& tape, const RawObs& obs) const {
  if (cfg_.grid_obs) {
    HIMPP_CHECK(static_cast<int>(obs.grid.size()) == enc_.in_dim(),
                "grid observation does not match the encoder schema");
    HIMPP_CHECK(static_cast<int>(obs.vec.size()) == cfg_.aux_dim,
                "auxiliary observation does not match the encoder schema");
    int hg = enc_.apply(tape, tape.input(obs.grid));
    int ha = enc_aux_.apply(tape, tape.input(obs.vec));
    return tape.relu(tape.add(hg, ha));
  }
  HIMPP_CHECK(static_cast<int>(obs.vec.size()) == cfg_.vec_obs_dim,
              "vector observation does not match the encoder schema");
  return enc_.apply(tape, tape.input(obs.vec));
}

std::vector<int> LatentModel::bottom_up_submanagers(
    Tape& tape, const HierGraph& g, const std::vector<int>& h_w0) const {
  HIMPP_CHECK(cfg_.levels == 3, "sub-managers exist only in 3-level hierarchies");
  std::vector<int> out;
  auto cells = g.cells();
  for (int s = 0; s < g.num_submanagers; ++s) {
    std::vector<int> children;
    for (int w : cells[static_cast<size_t>(s)])
      children.push_back(h_w0[static_cast<size_t>(w)]);
    int agg = tape.mean(children, cfg_.embed_dim);
    int tag = tape.input(g.submanager_tag[static_cast<size_t>(s)]);
    out.push_back(s_init_.apply(tape, tape.concat({agg, tag})));
  }
  return out;
}

int LatentModel::bottom_up_manager(Tape& tape,
                                   const std::vector<int>& h_children) const {
  int agg = tape.mean(h_children, cfg_.embed_dim);
  return m_init_.apply(tape, agg);
}

int LatentModel::msg_node(Tape& tape, const Mlp& net, MsgKind kind, int hi,
                          int hj) const {
  if (kind == MsgKind::mlp) return net.apply(tape, tape.concat({hi, hj}));
  return net.apply(tape, hj);  // graph-convolution form
}

std::vector<int> LatentModel::propagate_round(
    Tape& tape, const std::vector<int>& reprs,
    const std::vector<std::vector<int>>& adj, const std::string& level) const {
  const bool worker_level = level == "worker";
  const Mlp& msg = worker_level ? w_msg_ : s_msg_;
  const Mlp& up = worker_level ? w_up_ : s_up_;
  const MsgKind kind = worker_level ? cfg_.worker_msg : MsgKind::mlp;
  std::vector<int> next(reprs.size());
  for (size_t i = 0; i < reprs.size(); ++i) {
    std::vector<int> messages;
    for (int j : adj[i])
      messages.push_back(
          msg_node(tape, msg, kind, reprs[i], reprs[static_cast<size_t>(j)]));
    int agg = tape.mean(messages, cfg_.embed_dim);
    next[i] = up.apply(tape, tape.concat({reprs[i], agg}));
  }
  return next;
}

StepLatent LatentModel::run(ParamStore& ps, const HierGraph& g,
                            const std::vector<RawObs>& obs,
                            const std::vector<Vec>& mgr_goals,
                            const std::vector<Vec>& sub_goals) const {
  StepLatent out;
  out.tape = std::make_unique<Tape>(ps);
  Tape& tape = *out.tape;
  const int n = g.num_workers;
  HIMPP_CHECK(static_cast<int>(obs.size()) == n, "one observation per worker");

  out.h_w0.resize(static_cast<size_t>(n));
  for (int w = 0; w < n; ++w)
    out.h_w0[static_cast<size_t>(w)] = encode_worker(tape, obs[static_cast<size_t>(w)]);
  out.h_wL = out.h_w0;
  for (int r = 0; r < cfg_.rounds; ++r)
    out.h_wL = propagate_round(tape, out.h_wL, g.worker_adj, "worker");

  if (cfg_.levels == 3) {
    out.h_s0 = bottom_up_submanagers(tape, g, out.h_w0);
    // complete sub-manager clique
    std::vector<std::vector<int>> clique(out.h_s0.size());
    for (size_t i = 0; i < out.h_s0.size(); ++i)
      for (size_t j = 0; j < out.h_s0.size(); ++j)
        if (i != j) clique[i].push_back(static_cast<int>(j));
    out.h_sL = out.h_s0;
    for (int r = 0; r < cfg_.rounds; ++r)
      out.h_sL = propagate_round(tape, out.h_sL, clique, "submanager");
    out.h_m = bottom_up_manager(tape, out.h_s0);

    HIMPP_CHECK(mgr_goals.size() == out.h_s0.size(), "one manager goal per cell");
    HIMPP_CHECK(static_cast<int>(sub_goals.size()) == n, "one sub goal per worker");
    for (size_t s = 0; s < out.h_s0.size(); ++s)
      out.mgr_obs.push_back(tape.concat({out.h_m, out.h_s0[s], out.h_sL[s]}));
    for (int w = 0; w < n; ++w) {
      int s = g.cell_of_worker[static_cast<size_t>(w)];
      int gm = tape.input(mgr_goals[static_cast<size_t>(s)]);
      out.sub_obs.push_back(tape.concat({gm, out.h_sL[static_cast<size_t>(s)],
                                         out.h_w0[static_cast<size_t>(w)],
                                         out.h_wL[static_cast<size_t>(w)]}));
      int gs = tape.input(sub_goals[static_cast<size_t>(w)]);
      out.worker_obs.push_back(tape.concat({gs, out.h_w0[static_cast<size_t>(w)],
                                            out.h_wL[static_cast<size_t>(w)]}));
    }
  } else if (cfg_.levels == 2) {
    out.h_m = bottom_up_manager(tape, out.h_w0);
    HIMPP_CHECK(static_cast<int>(mgr_goals.size()) == n,
                "one manager goal per worker in a 2-level hierarchy");
    for (int w = 0; w < n; ++w) {
      out.mgr_obs.push_back(tape.concat({out.h_m, out.h_w0[static_cast<size_t>(w)],
                                         out.h_wL[static_cast<size_t>(w)]}));
      int gm = tape.input(mgr_goals[static_cast<size_t>(w)]);
      out.worker_obs.push_back(tape.concat({gm, out.h_w0[static_cast<size_t>(w)],
                                            out.h_wL[static_cast<size_t>(w)]}));
    }
  } else {
    for (int w = 0; w < n; ++w)
      out.worker_obs.push_back(tape.concat({out.h_w0[static_cast<size_t>(w)],
                                            out.h_wL[static_cast<size_t>(w)]}));
  }
  return out;
}

std::vector<std::string> LatentModel::worker_param_prefixes() const {
  return {prefix_ + ".w."};
}
std::vector<std::string> LatentModel::submanager_param_prefixes() const {
  return {prefix_ + ".s."};
}
std::vector<std::string> LatentModel::manager_param_prefixes() const {
  return {prefix_ + ".m."};
}

std::vector<const Mlp*> LatentModel::nets() const {
  std::vector<const Mlp*> out{&enc_, &w_msg_, &w_up_};
  if (cfg_.grid_obs) out.push_back(&enc_aux_);
  if (cfg_.levels == 3) {
    out.push_back(&s_init_);
    out.push_back(&s_msg_);
    out.push_back(&s_up_);
  }
  if (cfg_.levels >= 2) out.push_back(&m_init_);
  return out;
}

}  // namespace himpp
