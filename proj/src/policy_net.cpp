#include "qsc/policy_net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsc {

namespace {

// y = W x + b, W row-major (rows x cols)
void affine(const std::vector<double>& w, const std::vector<double>& b, int rows,
            int cols, const std::vector<double>& x, std::vector<double>& y) {
  y.assign(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    double acc = b.empty() ? 0.0 : b[r];
    const double* row = w.data() + static_cast<std::size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

std::vector<double> hidden_step(const NetParams& p, const std::vector<double>& h_prev,
                                const std::vector<double>& obs) {
  std::vector<double> a(p.hidden_width, 0.0);
  for (int r = 0; r < p.hidden_width; ++r) {
    double acc = p.b_h[r];
    const double* wi = p.w_in.data() + static_cast<std::size_t>(r) * p.input_width;
    for (int c = 0; c < p.input_width; ++c) acc += wi[c] * obs[c];
    const double* wr = p.w_rec.data() + static_cast<std::size_t>(r) * p.hidden_width;
    for (int c = 0; c < p.hidden_width; ++c) acc += wr[c] * h_prev[c];
    a[r] = std::tanh(acc);
  }
  return a;
}

}  // namespace

std::size_t NetParams::size() const {
  return w_in.size() + w_rec.size() + b_h.size() + w_out.size() + b_out.size();
}

double* NetParams::coord(std::size_t i) {
  if (i < w_in.size()) return &w_in[i];
  i -= w_in.size();
  if (i < w_rec.size()) return &w_rec[i];
  i -= w_rec.size();
  if (i < b_h.size()) return &b_h[i];
  i -= b_h.size();
  if (i < w_out.size()) return &w_out[i];
  i -= w_out.size();
  return &b_out.at(i);
}

std::vector<double> masked_softmax(const std::vector<double>& logits,
                                   const std::vector<int>& mask) {
  if (mask.empty()) throw std::invalid_argument("masked_softmax: empty mask");
  double top = logits[mask.front()];
  for (int a : mask) top = std::max(top, logits[a]);
  std::vector<double> p(logits.size(), 0.0);
  double z = 0.0;
  for (int a : mask) {
    p[a] = std::exp(logits[a] - top);
    z += p[a];
  }
  for (int a : mask) p[a] /= z;
  return p;
}

double window_loss(const NetParams& p, const std::vector<double>& h0,
                   const std::vector<NetStep>& window,
                   const std::vector<double>& target) {
  std::vector<double> h = h0;
  for (const auto& step : window) h = hidden_step(p, h, step.obs);
  std::vector<double> logits;
  affine(p.w_out, p.b_out, p.output_width, p.hidden_width, h, logits);
  auto dist = masked_softmax(logits, window.back().mask);
  double loss = 0.0;
  for (int a = 0; a < p.output_width; ++a)
    if (target[a] > 0.0) loss -= target[a] * std::log(dist[a]);
  return loss;
}

NetParams window_grad(const NetParams& p, const std::vector<double>& h0,
                      const std::vector<NetStep>& window,
                      const std::vector<double>& target) {
  const int T = static_cast<int>(window.size());
  // forward, keeping every hidden state
  std::vector<std::vector<double>> h(T + 1);
  h[0] = h0;
  for (int t = 0; t < T; ++t) h[t + 1] = hidden_step(p, h[t], window[t].obs);

  std::vector<double> logits;
  affine(p.w_out, p.b_out, p.output_width, p.hidden_width, h[T], logits);
  auto dist = masked_softmax(logits, window.back().mask);

  NetParams g;
  g.input_width = p.input_width;
  g.hidden_width = p.hidden_width;
  g.output_width = p.output_width;
  g.w_in.assign(p.w_in.size(), 0.0);
  g.w_rec.assign(p.w_rec.size(), 0.0);
  g.b_h.assign(p.b_h.size(), 0.0);
  g.w_out.assign(p.w_out.size(), 0.0);
  g.b_out.assign(p.b_out.size(), 0.0);

  // d loss / d logit = dist - target on the mask, zero elsewhere
  std::vector<double> dlogit(p.output_width, 0.0);
  for (int a : window.back().mask) dlogit[a] = dist[a] - target[a];

  std::vector<double> dh(p.hidden_width, 0.0);
  for (int r = 0; r < p.output_width; ++r) {
    g.b_out[r] = dlogit[r];
    double* grow = g.w_out.data() + static_cast<std::size_t>(r) * p.hidden_width;
    const double* wrow = p.w_out.data() + static_cast<std::size_t>(r) * p.hidden_width;
    for (int c = 0; c < p.hidden_width; ++c) {
      grow[c] = dlogit[r] * h[T][c];
      dh[c] += wrow[c] * dlogit[r];
    }
  }

  for (int t = T - 1; t >= 0; --t) {
    // through tanh
    std::vector<double> da(p.hidden_width);
    for (int r = 0; r < p.hidden_width; ++r)
      da[r] = dh[r] * (1.0 - h[t + 1][r] * h[t + 1][r]);
    for (int r = 0; r < p.hidden_width; ++r) {
      g.b_h[r] += da[r];
      double* gi = g.w_in.data() + static_cast<std::size_t>(r) * p.input_width;
      const auto& obs = window[t].obs;
      for (int c = 0; c < p.input_width; ++c) gi[c] += da[r] * obs[c];
      double* gr = g.w_rec.data() + static_cast<std::size_t>(r) * p.hidden_width;
      for (int c = 0; c < p.hidden_width; ++c) gr[c] += da[r] * h[t][c];
    }
    // next dh = W_rec^T da
    std::vector<double> dh_prev(p.hidden_width, 0.0);
    for (int r = 0; r < p.hidden_width; ++r) {
      const double* wr = p.w_rec.data() + static_cast<std::size_t>(r) * p.hidden_width;
      for (int c = 0; c < p.hidden_width; ++c) dh_prev[c] += wr[c] * da[r];
    }
    dh = std::move(dh_prev);
  }
  return g;
}

int select_action(const std::vector<double>& dist, SelectMode mode, Rng& rng) {
  if (mode == SelectMode::Greedy) {
    int best = 0;
    for (int a = 1; a < static_cast<int>(dist.size()); ++a)
      if (dist[a] > dist[best]) best = a;
    return best;
  }
  const double u = rng.uniform();
  double cum = 0.0;
  int last_positive = -1;
  for (int a = 0; a < static_cast<int>(dist.size()); ++a) {
    if (dist[a] <= 0.0) continue;
    last_positive = a;
    cum += dist[a];
    if (u < cum) return a;
  }
  return last_positive;  // rounding left a sliver at the top
}

std::vector<double> encode_automata_obs(int num_states, int num_actions, int state,
                                        int prev_action) {
  std::vector<double> obs(static_cast<std::size_t>(num_states) * num_actions, 0.0);
  if (prev_action >= 0) obs[static_cast<std::size_t>(state) * num_actions + prev_action] = 1.0;
  return obs;
}

std::vector<double> encode_lander_obs(int cell, int prev_inject) {
  std::vector<double> obs(6 * 5 + 2, 0.0);
  int rest = cell;
  for (int f = 0; f < 6; ++f) {
    obs[f * 5 + rest % 5] = 1.0;
    rest /= 5;
  }
  if (prev_inject >= 0) obs[30 + (prev_inject ? 1 : 0)] = 1.0;
  return obs;
}

PolicyNetwork::PolicyNetwork(int input_width, int output_width, std::uint64_t seed)
    : seed_(seed) {
  params_.input_width = input_width;
  params_.hidden_width = hidden_width;
  params_.output_width = output_width;
  Rng rng(seed);
  params_.w_in.resize(static_cast<std::size_t>(hidden_width) * input_width);
  for (auto& w : params_.w_in) w = rng.uniform(-0.1, 0.1);
  params_.w_rec.resize(static_cast<std::size_t>(hidden_width) * hidden_width);
  for (auto& w : params_.w_rec) w = rng.uniform(-0.1, 0.1);
  params_.b_h.assign(hidden_width, 0.0);
  params_.w_out.assign(static_cast<std::size_t>(output_width) * hidden_width, 0.0);
  params_.b_out.assign(output_width, 0.0);
  hidden_.assign(hidden_width, 0.0);
}

PolicyNetwork::PolicyNetwork(NetParams p, std::uint64_t seed, int train_steps)
    : params_(std::move(p)), seed_(seed), train_steps_(train_steps) {
  hidden_.assign(params_.hidden_width, 0.0);
}

std::vector<double> PolicyNetwork::forward(const std::vector<double>& obs,
                                           const std::vector<int>& mask) {
  if (static_cast<int>(obs.size()) != params_.input_width)
    throw std::invalid_argument("forward: observation width mismatch");
  if (mask.empty()) throw std::invalid_argument("forward: empty action mask");

  window_.push_back({{obs, mask}, hidden_});
  if (static_cast<int>(window_.size()) > truncation) window_.pop_front();

  hidden_ = hidden_step(params_, hidden_, obs);
  std::vector<double> logits;
  affine(params_.w_out, params_.b_out, params_.output_width, params_.hidden_width,
         hidden_, logits);
  return masked_softmax(logits, mask);
}

void PolicyNetwork::update(int executed_action, bool success, bool queried) {
  if (window_.empty()) throw std::logic_error("update: no forward pass recorded");
  const auto& mask = window_.back().step.mask;

  std::vector<double> target(params_.output_width, 0.0);
  if (queried || success) {
    target[executed_action] = 1.0;
  } else {
    int others = 0;
    for (int a : mask)
      if (a != executed_action) ++others;
    if (others == 0) return;  // nothing to push toward
    for (int a : mask)
      if (a != executed_action) target[a] = 1.0 / others;
  }

  std::vector<NetStep> steps;
  steps.reserve(window_.size());
  for (const auto& e : window_) steps.push_back(e.step);
  NetParams g = window_grad(params_, window_.front().h_prev, steps, target);

  const std::size_t n = params_.size();
  for (std::size_t i = 0; i < n; ++i)
    *params_.coord(i) -= learning_rate * *g.coord(i);
  ++train_steps_;
}

void PolicyNetwork::reset_hidden() {
  std::fill(hidden_.begin(), hidden_.end(), 0.0);
  window_.clear();
}

nlohmann::json PolicyNetwork::checkpoint() const {
  return nlohmann::json{{"input_width", params_.input_width},
                        {"hidden_width", params_.hidden_width},
                        {"output_width", params_.output_width},
                        {"w_in", params_.w_in},
                        {"w_rec", params_.w_rec},
                        {"b_h", params_.b_h},
                        {"w_out", params_.w_out},
                        {"b_out", params_.b_out},
                        {"seed", seed_},
                        {"train_steps", train_steps_}};
}

PolicyNetwork PolicyNetwork::from_checkpoint(const nlohmann::json& j) {
  NetParams p;
  p.input_width = j.at("input_width").get<int>();
  p.hidden_width = j.at("hidden_width").get<int>();
  p.output_width = j.at("output_width").get<int>();
  p.w_in = j.at("w_in").get<std::vector<double>>();
  p.w_rec = j.at("w_rec").get<std::vector<double>>();
  p.b_h = j.at("b_h").get<std::vector<double>>();
  p.w_out = j.at("w_out").get<std::vector<double>>();
  p.b_out = j.at("b_out").get<std::vector<double>>();
  const auto expect = [](std::size_t got, std::size_t want, const char* what) {
    if (got != want)
      throw std::runtime_error(std::string("checkpoint: bad size for ") + what);
  };
  expect(p.w_in.size(), static_cast<std::size_t>(p.hidden_width) * p.input_width, "w_in");
  expect(p.w_rec.size(), static_cast<std::size_t>(p.hidden_width) * p.hidden_width, "w_rec");
  expect(p.b_h.size(), static_cast<std::size_t>(p.hidden_width), "b_h");
  expect(p.w_out.size(), static_cast<std::size_t>(p.output_width) * p.hidden_width, "w_out");
  expect(p.b_out.size(), static_cast<std::size_t>(p.output_width), "b_out");
  return PolicyNetwork(std::move(p), j.at("seed").get<std::uint64_t>(),
                       j.at("train_steps").get<int>());
}

}  // namespace qsc
