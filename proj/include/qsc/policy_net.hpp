#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "json.hpp"

#include "qsc/rng.hpp"

namespace qsc {

// Flat parameter bundle for the recurrent policy. Kept as a plain struct so
// the loss/gradient below are pure functions of it (finite-difference
// testable).
struct NetParams {
  int input_width = 0;
  int hidden_width = 0;
  int output_width = 0;
  std::vector<double> w_in;   // hidden_width x input_width, row-major
  std::vector<double> w_rec;  // hidden_width x hidden_width
  std::vector<double> b_h;    // hidden_width
  std::vector<double> w_out;  // output_width x hidden_width
  std::vector<double> b_out;  // output_width

  std::size_t size() const;
  double* coord(std::size_t i);  // flat view across all five blocks, in order
};

// One step of the recurrence as seen by the loss: the input fed in and the
// actions that were enabled when the final step's distribution was produced.
struct NetStep {
  std::vector<double> obs;
  std::vector<int> mask;  // enabled action ids (only the last step's is used)
};

// Softmax restricted to `mask`; everything else gets exactly 0.
std::vector<double> masked_softmax(const std::vector<double>& logits,
                                   const std::vector<int>& mask);

// Run the window forward from hidden state h0 and return the cross-entropy of
// the final step's masked softmax against `target` (full-width, zeros on
// masked actions).
double window_loss(const NetParams& p, const std::vector<double>& h0,
                   const std::vector<NetStep>& window,
                   const std::vector<double>& target);

// Analytic gradient of window_loss with respect to every parameter,
// backpropagated through the whole window.
NetParams window_grad(const NetParams& p, const std::vector<double>& h0,
                      const std::vector<NetStep>& window,
                      const std::vector<double>& target);

enum class SelectMode { Sample, Greedy };

// Greedy takes the argmax (lowest index wins ties); sample draws
// proportionally from the caller's stream.
int select_action(const std::vector<double>& dist, SelectMode mode, Rng& rng);

// Input encodings. Automata: one-hot over (control state, previous own
// action) pairs; prev_action = -1 (episode start) leaves the vector all zero.
std::vector<double> encode_automata_obs(int num_states, int num_actions,
                                        int state, int prev_action);
// Lander: 6 features x 5 bins unpacked from the cell id, then a 2-slot
// one-hot of the previous inject decision (-1 at episode start = both zero).
std::vector<double> encode_lander_obs(int cell, int prev_inject);

class PolicyNetwork {
 public:
  // w_out/b_out/b_h start at zero (fresh nets are uniform over the mask);
  // w_in and w_rec draw from U(-0.1, 0.1) on a stream seeded with `seed`.
  PolicyNetwork(int input_width, int output_width, std::uint64_t seed);

  // Produces the masked distribution, advances the hidden state, and records
  // the step in the truncation window.
  std::vector<double> forward(const std::vector<double>& obs,
                              const std::vector<int>& mask);

  // One cross-entropy step on the most recent forward. Target: queried or
  // success -> one-hot(executed); failure -> uniform over mask minus the
  // executed action (skipped when that set is empty).
  void update(int executed_action, bool success, bool queried);

  // Zero the hidden state and drop the truncation window (episode boundary).
  void reset_hidden();

  const NetParams& params() const { return params_; }
  NetParams& mutable_params() { return params_; }
  int input_width() const { return params_.input_width; }
  int output_width() const { return params_.output_width; }
  int train_steps() const { return train_steps_; }
  std::uint64_t seed() const { return seed_; }

  nlohmann::json checkpoint() const;
  static PolicyNetwork from_checkpoint(const nlohmann::json& j);

  static constexpr int hidden_width = 32;
  static constexpr int truncation = 8;
  static constexpr double learning_rate = 0.05;

 private:
  explicit PolicyNetwork(NetParams p, std::uint64_t seed, int train_steps);

  struct WindowEntry {
    NetStep step;
    std::vector<double> h_prev;  // hidden state entering this step
  };

  NetParams params_;
  std::vector<double> hidden_;
  std::deque<WindowEntry> window_;  // last <= truncation steps
  std::uint64_t seed_ = 0;
  int train_steps_ = 0;
};

}  // namespace qsc
