#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qsc {

// Thin wrapper over mt19937_64 with pinned draw algorithms. The standard
// distributions are implementation-defined, which would break byte-identical
// output across toolchains; everything here is derived from raw engine words.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // uniform double in [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    for (;;) {
      uint64_t r = gen_();
      if (r < limit) return static_cast<int>(r % un);
    }
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    if (v.empty()) throw std::invalid_argument("pick: empty vector");
    return v[static_cast<size_t>(uniform_int(static_cast<int>(v.size())))];
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace qsc
