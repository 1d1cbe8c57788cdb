#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "summability/errors.hpp"
#include "summability/rational.hpp"

namespace summability {

/// Geometric evaluation schedule plus the thresholds that turn an asymptotic
/// claim into a desk-scale decision. Every limit verdict in the library is
/// taken through one of these.
struct CheckpointPolicy {
  std::uint64_t n0 = 64;              // first checkpoint
  double growth = 2.0;                // geometric ratio between checkpoints
  unsigned count = 14;                // number of checkpoints (default tops out near 5*10^5)
  Rational abs_tol = Rational(1, 10);       // residual convergence threshold
  Rational decay_ratio = Rational(1, 5);    // required final/first residual ratio
  Rational div_threshold = Rational(10);    // divergence threshold
  Rational band = Rational(1, 50);          // plateau stabilization band

  void validate() const {
    if (n0 < 1) throw PreconditionError("policy: n0 must be >= 1");
    if (!(growth > 1.0)) throw PreconditionError("policy: growth must be > 1");
    if (count < 3) throw PreconditionError("policy: need at least 3 checkpoints");
    if (!(abs_tol > 0)) throw PreconditionError("policy: abs_tol must be positive");
    if (!(div_threshold > abs_tol))
      throw PreconditionError("policy: div_threshold must exceed abs_tol");
    if (!(band > 0)) throw PreconditionError("policy: band must be positive");
    if (!(decay_ratio > 0)) throw PreconditionError("policy: decay_ratio must be positive");
  }

  // Strictly increasing evaluation points n_1 < ... < n_count.
  std::vector<std::uint64_t> checkpoints() const {
    validate();
    std::vector<std::uint64_t> out;
    out.reserve(count);
    double n = static_cast<double>(n0);
    std::uint64_t prev = 0;
    for (unsigned i = 0; i < count; ++i) {
      auto v = static_cast<std::uint64_t>(std::llround(n));
      if (v <= prev) v = prev + 1;
      out.push_back(v);
      prev = v;
      n *= growth;
    }
    return out;
  }

  std::uint64_t final_checkpoint() const { return checkpoints().back(); }
};

}  // namespace summability
