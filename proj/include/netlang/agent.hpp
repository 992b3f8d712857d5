// Copyright 2026 The netlang Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Speaker-listener agents: a shared object encoder feeding a sender LSTM
// policy and a receiver LSTM, trained with entropy-regularized REINFORCE.
// Forward passes keep the activations needed for exact reverse-mode
// gradients, so a sampled trajectory can be replayed and differentiated.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "netlang/game_world.hpp"
#include "netlang/random.hpp"

namespace netlang {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr std::size_t kEndOfMessage = 0;

struct AgentShape {
  FactorCardinalities factors;
  std::size_t encoder_hidden = 64;
  std::size_t hidden = 64;  // encoder output and both LSTM hidden states
  std::size_t vocab = 20;
  std::size_t token_dim = 32;
  std::size_t max_len = 5;
};

struct LstmCell {
  MatrixXd w_x;  // 4H x D, gate blocks ordered input, forget, candidate, output
  MatrixXd w_h;  // 4H x H
  VectorXd b;    // 4H
};

// Which role's optimizer touches a tensor.
enum class ParamGroup { Encoder, Embedding, SenderHead, ReceiverHead };

struct AgentParams {
  MatrixXd enc_w1;
  VectorXd enc_b1;
  MatrixXd enc_w2;
  VectorXd enc_b2;
  MatrixXd embedding;  // vocab x token_dim, one row per token
  LstmCell sender;
  MatrixXd out_w;  // vocab x hidden
  VectorXd out_b;
  LstmCell receiver;

  bool operator==(const AgentParams& o) const {
    bool same = true;
    visit([&](const char*, ParamGroup, const auto& a, const auto& b) {
      same = same && a.rows() == b.rows() && a.cols() == b.cols() && a == b;
    }, *this, o);
    return same;
  }

  // Calls f(name, group, tensor...) for the matching tensor of every bundle,
  // in a fixed order.
  template <typename F, typename... Ps>
  static void visit(F&& f, Ps&... ps) {
    f("encoder.w1", ParamGroup::Encoder, ps.enc_w1...);
    f("encoder.b1", ParamGroup::Encoder, ps.enc_b1...);
    f("encoder.w2", ParamGroup::Encoder, ps.enc_w2...);
    f("encoder.b2", ParamGroup::Encoder, ps.enc_b2...);
    f("embedding", ParamGroup::Embedding, ps.embedding...);
    f("sender.w_x", ParamGroup::SenderHead, ps.sender.w_x...);
    f("sender.w_h", ParamGroup::SenderHead, ps.sender.w_h...);
    f("sender.b", ParamGroup::SenderHead, ps.sender.b...);
    f("sender.out_w", ParamGroup::SenderHead, ps.out_w...);
    f("sender.out_b", ParamGroup::SenderHead, ps.out_b...);
    f("receiver.w_x", ParamGroup::ReceiverHead, ps.receiver.w_x...);
    f("receiver.w_h", ParamGroup::ReceiverHead, ps.receiver.w_h...);
    f("receiver.b", ParamGroup::ReceiverHead, ps.receiver.b...);
  }

  template <typename F>
  void for_each(F&& f) { visit(f, *this); }
  template <typename F>
  void for_each(F&& f) const { visit(f, *this); }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for_each([&](const char*, ParamGroup, const auto& t) { n += static_cast<std::size_t>(t.size()); });
    return n;
  }

  bool all_finite() const {
    bool ok = true;
    for_each([&](const char*, ParamGroup, const auto& t) { ok = ok && t.allFinite(); });
    return ok;
  }

  // Same shapes, all zeros; used as a gradient accumulator.
  AgentParams zeros_like() const {
    AgentParams z = *this;
    z.for_each([](const char*, ParamGroup, auto& t) { t.setZero(); });
    return z;
  }
};

// Half-widths of the uniform initialization. Token embeddings and the sender
// output projection start wider than the rest so that, from the first
// update, messages depend on the target and the receiver's dot-product scores
// are not vanishingly small.
struct InitScales {
  double base = 0.3;
  double embedding = 1.0;
  double sender_output = 3.0;
};

inline void init_tensor(MatrixXd& m, Rng& rng, double scale) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = (2.0 * uniform01(rng) - 1.0) * scale;
}

inline void init_tensor(VectorXd& v, Rng& rng, double scale) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = (2.0 * uniform01(rng) - 1.0) * scale;
}

// Every entry uniform in [-scale, scale], drawn in tensor order.
inline AgentParams init_params(const AgentShape& s, Rng& rng, const InitScales& scales = {}) {
  const auto F = static_cast<Eigen::Index>(s.factors.total());
  const auto E = static_cast<Eigen::Index>(s.encoder_hidden);
  const auto H = static_cast<Eigen::Index>(s.hidden);
  const auto V = static_cast<Eigen::Index>(s.vocab);
  const auto D = static_cast<Eigen::Index>(s.token_dim);
  if (s.vocab < 2) throw ConfigError("vocabulary needs at least 2 symbols");
  if (s.max_len < 1) throw ConfigError("max message length must be >= 1");
  AgentParams p;
  p.enc_w1.resize(E, F);
  p.enc_b1.resize(E);
  p.enc_w2.resize(H, E);
  p.enc_b2.resize(H);
  p.embedding.resize(V, D);
  for (LstmCell* c : {&p.sender, &p.receiver}) {
    c->w_x.resize(4 * H, D);
    c->w_h.resize(4 * H, H);
    c->b.resize(4 * H);
  }
  p.out_w.resize(V, H);
  p.out_b.resize(V);
  p.for_each([&](const char*, ParamGroup, auto& t) {
    double scale = scales.base;
    if (&t == static_cast<void*>(&p.embedding)) scale = scales.embedding;
    if (&t == static_cast<void*>(&p.out_w)) scale = scales.sender_output;
    init_tensor(t, rng, scale);
  });
  return p;
}

// ---------------------------------------------------------------------------
// Encoder: one-hot factors -> tanh hidden layer -> linear embedding.

struct EncoderCache {
  VectorXd input;
  VectorXd hidden;
  VectorXd output;
};

inline VectorXd one_hot_factors(const FactorCardinalities& f, const ObjectSpec& o) {
  VectorXd x = VectorXd::Zero(static_cast<Eigen::Index>(f.total()));
  x(static_cast<Eigen::Index>(o.shape)) = 1.0;
  x(static_cast<Eigen::Index>(f.shapes + o.object_color)) = 1.0;
  x(static_cast<Eigen::Index>(f.shapes + f.object_colors + o.floor_color)) = 1.0;
  return x;
}

inline EncoderCache encode_cached(const AgentParams& p, const FactorCardinalities& f,
                                  const ObjectSpec& o) {
  EncoderCache c;
  c.input = one_hot_factors(f, o);
  c.hidden = (p.enc_w1 * c.input + p.enc_b1).array().tanh().matrix();
  c.output = p.enc_w2 * c.hidden + p.enc_b2;
  return c;
}

inline VectorXd encode(const AgentParams& p, const FactorCardinalities& f, const ObjectSpec& o) {
  return encode_cached(p, f, o).output;
}

inline void encoder_backward(const AgentParams& p, const EncoderCache& c, const VectorXd& d_out,
                             AgentParams& g) {
  g.enc_w2.noalias() += d_out * c.hidden.transpose();
  g.enc_b2 += d_out;
  const VectorXd d_pre =
      ((p.enc_w2.transpose() * d_out).array() * (1.0 - c.hidden.array().square())).matrix();
  g.enc_w1.noalias() += d_pre * c.input.transpose();
  g.enc_b1 += d_pre;
}

// ---------------------------------------------------------------------------
// LSTM cell.

struct LstmStep {
  VectorXd x, h_prev, c_prev;
  VectorXd i, f, g, o;  // post-activation gates
  VectorXd c, tanh_c, h;
};

inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

inline LstmStep lstm_forward(const LstmCell& cell, const VectorXd& x, const VectorXd& h_prev,
                             const VectorXd& c_prev) {
  const Eigen::Index H = h_prev.size();
  const VectorXd a = cell.w_x * x + cell.w_h * h_prev + cell.b;
  LstmStep s;
  s.x = x;
  s.h_prev = h_prev;
  s.c_prev = c_prev;
  s.i = a.segment(0, H).unaryExpr([](double v) { return sigmoid(v); });
  s.f = a.segment(H, H).unaryExpr([](double v) { return sigmoid(v); });
  s.g = a.segment(2 * H, H).array().tanh().matrix();
  s.o = a.segment(3 * H, H).unaryExpr([](double v) { return sigmoid(v); });
  s.c = (s.f.array() * c_prev.array() + s.i.array() * s.g.array()).matrix();
  s.tanh_c = s.c.array().tanh().matrix();
  s.h = (s.o.array() * s.tanh_c.array()).matrix();
  return s;
}

// Accumulates parameter gradients into g_cell. On return dh and dc hold the
// gradients with respect to h_prev and c_prev; dx receives the input gradient.
inline void lstm_backward(const LstmCell& cell, const LstmStep& s, VectorXd& dh, VectorXd& dc,
                          VectorXd& dx, LstmCell& g_cell) {
  const Eigen::Index H = s.h.size();
  const auto o = s.o.array();
  const auto i = s.i.array();
  const auto f = s.f.array();
  const auto gg = s.g.array();
  const auto tc = s.tanh_c.array();
  const Eigen::ArrayXd dc_total = dc.array() + dh.array() * o * (1.0 - tc.square());
  VectorXd da(4 * H);
  da.segment(0, H) = (dc_total * gg * i * (1.0 - i)).matrix();
  da.segment(H, H) = (dc_total * s.c_prev.array() * f * (1.0 - f)).matrix();
  da.segment(2 * H, H) = (dc_total * i * (1.0 - gg.square())).matrix();
  da.segment(3 * H, H) = (dh.array() * tc * o * (1.0 - o)).matrix();
  g_cell.w_x.noalias() += da * s.x.transpose();
  g_cell.w_h.noalias() += da * s.h_prev.transpose();
  g_cell.b += da;
  dx = cell.w_x.transpose() * da;
  dh = cell.w_h.transpose() * da;
  dc = (dc_total * f).matrix();
}

// ---------------------------------------------------------------------------
// Distributions.

inline VectorXd softmax_vec(const VectorXd& logits) {
  const double top = logits.maxCoeff();
  VectorXd p = (logits.array() - top).exp().matrix();
  return p / p.sum();
}

inline double entropy_of(const VectorXd& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0.0) h -= p(i) * std::log(p(i));
  return h;
}

inline std::size_t sample_from(const VectorXd& p, Rng& rng) {
  return sample_categorical(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())), rng);
}

// ---------------------------------------------------------------------------
// Sender.

struct Message {
  std::vector<std::size_t> tokens;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const Message&) const = default;
};

struct SenderTrace {
  EncoderCache target;
  std::vector<std::size_t> inputs;  // token fed at each step (end symbol first)
  std::vector<LstmStep> steps;
  std::vector<VectorXd> probs;
};

struct SenderOutput {
  Message message;
  std::vector<double> log_probs;
  std::vector<double> entropies;  // per-step policy entropy
  double entropy = 0.0;           // H_S, summed over steps
  SenderTrace trace;

  double log_prob_sum() const {
    double s = 0.0;
    for (double v : log_probs) s += v;
    return s;
  }
};

namespace detail {

// Runs the sender policy. With forced == nullptr tokens are sampled; otherwise
// the given message is replayed and scored.
inline SenderOutput run_sender(const AgentParams& p, const AgentShape& s, const ObjectSpec& target,
                               Rng* rng, const Message* forced) {
  SenderOutput out;
  out.trace.target = encode_cached(p, s.factors, target);
  VectorXd h = out.trace.target.output;
  VectorXd c = VectorXd::Zero(h.size());
  std::size_t prev = kEndOfMessage;
  for (std::size_t l = 0; l < s.max_len; ++l) {
    const VectorXd x = p.embedding.row(static_cast<Eigen::Index>(prev)).transpose();
    LstmStep step = lstm_forward(p.sender, x, h, c);
    const VectorXd probs = softmax_vec(p.out_w * step.h + p.out_b);
    std::size_t token;
    if (forced) {
      if (l >= forced->size()) throw Error("replayed message ended without the end symbol");
      token = forced->tokens[l];
      if (token >= s.vocab) throw Error("replayed token outside the vocabulary");
    } else {
      token = sample_from(probs, *rng);
    }
    out.message.tokens.push_back(token);
    out.log_probs.push_back(std::log(probs(static_cast<Eigen::Index>(token))));
    out.entropies.push_back(entropy_of(probs));
    out.entropy += out.entropies.back();
    h = step.h;
    c = step.c;
    out.trace.inputs.push_back(prev);
    out.trace.steps.push_back(std::move(step));
    out.trace.probs.push_back(probs);
    if (token == kEndOfMessage) break;
    prev = token;
  }
  if (forced && out.message.size() != forced->size())
    throw Error("replayed message continues past the end symbol or max length");
  return out;
}

}  // namespace detail

// Hidden state starts at the target embedding, cell state at zero, and the
// end symbol doubles as the start input. Stops after the end symbol or
// max_len tokens.
inline SenderOutput sender_forward(const AgentParams& p, const AgentShape& s,
                                   const ObjectSpec& target, Rng& rng) {
  return detail::run_sender(p, s, target, &rng, nullptr);
}

// Scores a fixed message under the sender policy.
inline SenderOutput sender_replay(const AgentParams& p, const AgentShape& s,
                                  const ObjectSpec& target, const Message& msg) {
  return detail::run_sender(p, s, target, nullptr, &msg);
}

// Gradient of logp_weight * sum(log p) + entropy_weight * H_S, accumulated into g.
inline void sender_backward(const AgentParams& p, const SenderOutput& out, double logp_weight,
                            double entropy_weight, AgentParams& g) {
  const auto& tr = out.trace;
  const Eigen::Index H = tr.target.output.size();
  VectorXd dh = VectorXd::Zero(H);
  VectorXd dc = VectorXd::Zero(H);
  VectorXd dx;
  for (std::size_t l = tr.steps.size(); l-- > 0;) {
    const VectorXd& probs = tr.probs[l];
    VectorXd d_logits = -logp_weight * probs;
    d_logits(static_cast<Eigen::Index>(out.message.tokens[l])) += logp_weight;
    if (entropy_weight != 0.0) {
      const double h_l = out.entropies[l];
      for (Eigen::Index k = 0; k < probs.size(); ++k)
        if (probs(k) > 0.0) d_logits(k) -= entropy_weight * probs(k) * (std::log(probs(k)) + h_l);
    }
    const LstmStep& step = tr.steps[l];
    g.out_w.noalias() += d_logits * step.h.transpose();
    g.out_b += d_logits;
    dh.noalias() += p.out_w.transpose() * d_logits;
    lstm_backward(p.sender, step, dh, dc, dx, g.sender);
    g.embedding.row(static_cast<Eigen::Index>(tr.inputs[l])) += dx.transpose();
  }
  encoder_backward(p, tr.target, dh, g);
}

// ---------------------------------------------------------------------------
// Receiver.

// p_i proportional to exp(z . u_i).
inline VectorXd gibbs_distribution(const VectorXd& z, std::span<const VectorXd> embeddings) {
  VectorXd scores(static_cast<Eigen::Index>(embeddings.size()));
  for (std::size_t k = 0; k < embeddings.size(); ++k)
    scores(static_cast<Eigen::Index>(k)) = z.dot(embeddings[k]);
  return softmax_vec(scores);
}

struct ReceiverTrace {
  std::vector<std::size_t> tokens;
  std::vector<EncoderCache> candidates;
  std::vector<LstmStep> steps;
  VectorXd z;
};

struct ReceiverOutput {
  std::size_t choice = 0;
  double log_prob = 0.0;
  std::vector<double> distribution;
  ReceiverTrace trace;
};

namespace detail {

inline ReceiverOutput run_receiver(const AgentParams& p, const AgentShape& s, const Message& msg,
                                   std::span<const ObjectSpec> candidates, Rng* rng,
                                   const std::size_t* forced) {
  if (candidates.empty()) throw Error("receiver needs at least one candidate");
  if (msg.size() == 0) throw Error("receiver got an empty message");
  ReceiverOutput out;
  const auto H = static_cast<Eigen::Index>(s.hidden);
  VectorXd h = VectorXd::Zero(H);
  VectorXd c = VectorXd::Zero(H);
  out.trace.tokens = msg.tokens;
  for (std::size_t tok : msg.tokens) {
    if (tok >= s.vocab) throw Error("message token outside the vocabulary");
    LstmStep step =
        lstm_forward(p.receiver, p.embedding.row(static_cast<Eigen::Index>(tok)).transpose(), h, c);
    h = step.h;
    c = step.c;
    out.trace.steps.push_back(std::move(step));
  }
  out.trace.z = h;
  std::vector<VectorXd> embeddings;
  for (const auto& cand : candidates) {
    out.trace.candidates.push_back(encode_cached(p, s.factors, cand));
    embeddings.push_back(out.trace.candidates.back().output);
  }
  const VectorXd probs = gibbs_distribution(out.trace.z, embeddings);
  out.distribution.assign(probs.data(), probs.data() + probs.size());
  if (forced) {
    if (*forced >= candidates.size()) throw Error("replayed choice outside the candidate set");
    out.choice = *forced;
  } else {
    out.choice = sample_from(probs, *rng);
  }
  out.log_prob = std::log(probs(static_cast<Eigen::Index>(out.choice)));
  return out;
}

}  // namespace detail

// Reads the message with the receiver LSTM from a zero state; the final
// hidden state z scores each candidate embedding u by z.u, and the choice is
// sampled from the resulting Gibbs distribution.
inline ReceiverOutput receiver_forward(const AgentParams& p, const AgentShape& s, const Message& msg,
                                       std::span<const ObjectSpec> candidates, Rng& rng) {
  return detail::run_receiver(p, s, msg, candidates, &rng, nullptr);
}

inline ReceiverOutput receiver_replay(const AgentParams& p, const AgentShape& s, const Message& msg,
                                      std::span<const ObjectSpec> candidates, std::size_t choice) {
  return detail::run_receiver(p, s, msg, candidates, nullptr, &choice);
}

// Gradient of logp_weight * log p(choice), accumulated into g.
inline void receiver_backward(const AgentParams& p, const ReceiverOutput& out, double logp_weight,
                              AgentParams& g) {
  const auto& tr = out.trace;
  const Eigen::Index H = tr.z.size();
  VectorXd dz = VectorXd::Zero(H);
  for (std::size_t k = 0; k < tr.candidates.size(); ++k) {
    double d_score = -logp_weight * out.distribution[k];
    if (k == out.choice) d_score += logp_weight;
    dz.noalias() += d_score * tr.candidates[k].output;
    encoder_backward(p, tr.candidates[k], d_score * tr.z, g);
  }
  VectorXd dc = VectorXd::Zero(H);
  VectorXd dx;
  for (std::size_t l = tr.steps.size(); l-- > 0;) {
    lstm_backward(p.receiver, tr.steps[l], dz, dc, dx, g.receiver);
    g.embedding.row(static_cast<Eigen::Index>(tr.tokens[l])) += dx.transpose();
  }
}

// ---------------------------------------------------------------------------
// Objective and updates.

struct LossTerms {
  double reward = 0.0;
  double baseline = 0.0;
  double sender_logprob_sum = 0.0;
  double receiver_logprob = 0.0;
  double entropy = 0.0;
  double alpha = 0.0;

  double advantage() const { return reward - baseline; }
  double policy_term() const { return advantage() * (sender_logprob_sum + receiver_logprob); }
  // J = (R - b)(sum log p_S + log p_L) + alpha H_S, to be maximized.
  double objective() const { return policy_term() + alpha * entropy; }
};

inline LossTerms compute_losses(const SenderOutput& s, const ReceiverOutput& r, double reward_value,
                                double baseline, double alpha) {
  LossTerms t;
  t.reward = reward_value;
  t.baseline = baseline;
  t.sender_logprob_sum = s.log_prob_sum();
  t.receiver_logprob = r.log_prob;
  t.entropy = s.entropy;
  t.alpha = alpha;
  return t;
}

inline constexpr std::size_t kEntropyAnnealSteps = 1'000'000;

// alpha = 0.1 - |R - b| * 0.1 before one million speaker steps, 0.01 after.
inline double entropy_coefficient(std::size_t speaker_steps, double abs_advantage) {
  if (speaker_steps >= kEntropyAnnealSteps) return 0.01;
  return 0.1 - abs_advantage * 0.1;
}

struct SgdConfig {
  double learning_rate = 0.5;
  double clip_norm = 5.0;
};

// Which heads an agent used within a minibatch.
struct RolesPlayed {
  bool sender = false;
  bool receiver = false;

  bool trains(ParamGroup g) const {
    switch (g) {
      case ParamGroup::Encoder:
      case ParamGroup::Embedding: return sender || receiver;
      case ParamGroup::SenderHead: return sender;
      case ParamGroup::ReceiverHead: return receiver;
    }
    return false;
  }
};

// Clipped gradient-descent step on the trainable tensors. Tensors of frozen
// groups are left untouched. Returns the pre-clip gradient norm.
inline double sgd_step(AgentParams& params, const AgentParams& grad, RolesPlayed roles,
                       const SgdConfig& opt) {
  double sq = 0.0;
  AgentParams::visit([&](const char*, ParamGroup g, auto&, const auto& d) {
    if (roles.trains(g)) sq += d.squaredNorm();
  }, params, grad);
  const double norm = std::sqrt(sq);
  if (!std::isfinite(norm)) throw NumericError("non-finite gradient (norm " + std::to_string(norm) + ")");
  const double scale = (opt.clip_norm > 0.0 && norm > opt.clip_norm) ? opt.clip_norm / norm : 1.0;
  const double step = opt.learning_rate * scale;
  AgentParams::visit([&](const char*, ParamGroup g, auto& t, const auto& d) {
    if (roles.trains(g)) t -= step * d;
  }, params, grad);
  return norm;
}

// One played round, kept with its traces for the update.
struct PlayedGame {
  bool first_is_sender = true;  // agent a of the pair sent the message
  GameInstance game;
  SenderOutput sender;
  ReceiverOutput receiver;
  int reward = 0;
};

inline PlayedGame play_game(const AgentParams& sender, const AgentParams& receiver,
                            const AgentShape& shape, GameInstance game, Rng& rng) {
  PlayedGame pg;
  pg.game = std::move(game);
  pg.sender = sender_forward(sender, shape, pg.game.target(), rng);
  pg.receiver = receiver_forward(receiver, shape, pg.sender.message, pg.game.candidates, rng);
  pg.reward = reward(pg.receiver.choice, pg.game.target_index);
  return pg;
}

struct UpdateStats {
  double baseline = 0.0;
  double mean_abs_advantage = 0.0;
  std::array<double, 2> grad_norm{0.0, 0.0};
};

// One REINFORCE step for a pair on a minibatch of their games. The baseline
// is the minibatch mean reward; each game's entropy coefficient uses its
// sender's speaker-step count. Gradients of -J are averaged over the batch,
// then each agent takes a clipped step on the heads it used.
inline UpdateStats apply_update(AgentParams& a, AgentParams& b, std::span<const PlayedGame> batch,
                                const SgdConfig& opt, std::array<std::size_t, 2> speaker_steps) {
  UpdateStats st;
  if (batch.empty()) return st;
  const double n = static_cast<double>(batch.size());
  for (const auto& pg : batch) st.baseline += pg.reward;
  st.baseline /= n;
  for (const auto& pg : batch) st.mean_abs_advantage += std::abs(pg.reward - st.baseline);
  st.mean_abs_advantage /= n;

  AgentParams ga = a.zeros_like();
  AgentParams gb = b.zeros_like();
  std::array<RolesPlayed, 2> roles;
  for (const auto& pg : batch) {
    const std::size_t si = pg.first_is_sender ? 0 : 1;
    AgentParams& s_params = si == 0 ? a : b;
    AgentParams& r_params = si == 0 ? b : a;
    AgentParams& gs = si == 0 ? ga : gb;
    AgentParams& gr = si == 0 ? gb : ga;
    roles[si].sender = true;
    roles[1 - si].receiver = true;
    const double adv = pg.reward - st.baseline;
    const double alpha = entropy_coefficient(speaker_steps[si], st.mean_abs_advantage);
    // Minimizing -J: weights carry the minus sign and the 1/N average.
    sender_backward(s_params, pg.sender, -adv / n, -alpha / n, gs);
    receiver_backward(r_params, pg.receiver, -adv / n, gr);
  }
  st.grad_norm[0] = sgd_step(a, ga, roles[0], opt);
  st.grad_norm[1] = sgd_step(b, gb, roles[1], opt);
  return st;
}

// ---------------------------------------------------------------------------
// Checkpoints: "netlang-params 1", then per tensor a "name rows cols" line
// followed by one line of hexfloat values per row.

inline void write_params(std::ostream& os, const AgentParams& p) {
  os << "netlang-params 1\n";
  p.for_each([&](const char* name, ParamGroup, const auto& t) {
    os << name << ' ' << t.rows() << ' ' << t.cols() << '\n';
    os << std::hexfloat;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      for (Eigen::Index j = 0; j < t.cols(); ++j) os << (j ? " " : "") << t(i, j);
      os << '\n';
    }
    os << std::defaultfloat;
  });
}

inline AgentParams read_params(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "netlang-params" || version != 1)
    throw ConfigError("read_params: not a netlang-params v1 checkpoint");
  AgentParams p;
  p.for_each([&](const char* name, ParamGroup, auto& t) {
    std::string got;
    Eigen::Index rows = 0, cols = 0;
    if (!(is >> got >> rows >> cols) || got != name)
      throw ConfigError(std::string("read_params: expected tensor ") + name);
    using T = std::remove_cvref_t<decltype(t)>;
    if constexpr (T::ColsAtCompileTime == 1) {
      if (cols != 1) throw ConfigError(std::string("read_params: ") + name + " must be a column");
      t.resize(rows);
    } else {
      t.resize(rows, cols);
    }
    std::string tok;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (!(is >> tok)) throw ConfigError(std::string("read_params: truncated tensor ") + name);
        t(i, j) = std::strtod(tok.c_str(), nullptr);
      }
  });
  return p;
}

}  // namespace netlang
