#pragma once

#include <cstdint>
#include <vector>

#include "coalg/expr.hpp"

namespace coalg {

// Deterministic, platform-independent stream (splitmix64). Sample i of a run
// only depends on (seed, i), so loops can fan out without changing results.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  static Rng for_sample(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
    mix.next_u64();
    return mix;
  }
};

// Axis-aligned sampling box in phase space. Defaults follow the domain
// convention q_i in [0.2, 1.5], p_i in [-1, 1], away from coordinate
// singularities of the bundled realizations.
struct Box {
  double q_lo = 0.2, q_hi = 1.5;
  double p_lo = -1.0, p_hi = 1.0;

  static Box standard() { return Box{}; }
  static Box make(double ql, double qh, double pl, double ph) { return Box{ql, qh, pl, ph}; }

  PhasePoint sample(int n, std::uint64_t seed, std::uint64_t index) const {
    Rng rng = Rng::for_sample(seed, index);
    Eigen::VectorXd q(n), p(n);
    for (int i = 0; i < n; ++i) q[i] = rng.uniform(q_lo, q_hi);
    for (int i = 0; i < n; ++i) p[i] = rng.uniform(p_lo, p_hi);
    return PhasePoint(std::move(q), std::move(p));
  }

  std::vector<PhasePoint> sample_many(int n, std::uint64_t seed, int count) const {
    std::vector<PhasePoint> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(sample(n, seed, i));
    return out;
  }
};

}  // namespace coalg
