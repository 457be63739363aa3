// numeric.hpp -- standard-normal CDF and two-sided p-values.
//
// Self-contained double-precision primitives: no libm beyond exp(), so the
// p-values reported by every other module reproduce bit-for-bit across
// platforms.
#pragma once

#include "hetseq/errors.hpp"

namespace hetseq {

// A probability in [0,1]. Construction clamps floating-point overshoot of at
// most 1e-12 outside the unit interval and rejects anything worse.
class Probability {
 public:
  explicit Probability(double value);

  double value() const { return value_; }

  friend bool operator==(Probability a, Probability b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(Probability a, Probability b) {
    return a.value_ < b.value_;
  }

 private:
  double value_;
};

// Complementary error function, Cody's rational approximation
// (W. J. Cody, "Rational Chebyshev approximation for the error function",
// Math. Comp. 23 (1969); the SPECFUN calerf scheme). Relative error is a few
// ulps over the whole double range.
double erfc_cody(double x);

// Phi(x), absolute error below 1e-15 on |x| <= 8. Throws DomainError on
// non-finite input.
Probability normal_cdf(double x);

// 2*Phi(-|t|). Even in t bit-for-bit. Throws DomainError on non-finite input.
Probability two_sided_p(double t);

}  // namespace hetseq
