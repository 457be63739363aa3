#include "hetseq/numeric.hpp"

#include <cmath>

namespace hetseq {

Probability::Probability(double value) {
  if (!std::isfinite(value)) {
    throw DomainError("probability is not finite");
  }
  if (value < 0.0) {
    if (value < -1e-12) {
      throw DomainError("probability undershoots 0 by more than 1e-12");
    }
    value = 0.0;
  } else if (value > 1.0) {
    if (value > 1.0 + 1e-12) {
      throw DomainError("probability overshoots 1 by more than 1e-12");
    }
    value = 1.0;
  }
  value_ = value;
}

namespace {

constexpr double kThresh = 0.46875;
constexpr double kXSmall = 1.11e-16;
constexpr double kInvSqrtPi = 5.6418958354775628695e-1;
constexpr double kSqrt2 = 1.41421356237309504880168872420969808;

constexpr double kA[5] = {3.16112374387056560e00, 1.13864154151050156e02,
                          3.77485237685302021e02, 3.20937758913846947e03,
                          1.85777706184603153e-1};
constexpr double kB[4] = {2.36012909523441209e01, 2.44024637934444173e02,
                          1.28261652607737228e03, 2.84423683343917062e03};
constexpr double kC[9] = {5.64188496988670089e-1, 8.88314979438837594e00,
                          6.61191906371416295e01, 2.98635138197400131e02,
                          8.81952221241769090e02, 1.71204761263407058e03,
                          2.05107837782607147e03, 1.23033935479799725e03,
                          2.15311535474403846e-8};
constexpr double kD[8] = {1.57449261107098347e01, 1.17693950891312499e02,
                          5.37181101862009858e02, 1.62138957456669019e03,
                          3.29079923573345963e03, 4.36261909014324716e03,
                          3.43936767414372164e03, 1.23033935480374942e03};
constexpr double kP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                          1.25781726111229246e-1, 1.60837851487422766e-2,
                          6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double kQ[5] = {2.56852019228982242e00, 1.87295284992346047e00,
                          5.27905102951428412e-1, 6.05183413124413191e-2,
                          2.33520497626869185e-3};

// exp(-y*y) split into an exact-square part and a small correction, as in
// calerf: keeps the tail accurate to a few ulps.
double scaled_exp(double y, double poly) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del) * poly;
}

}  // namespace

double erfc_cody(double x) {
  const double y = std::fabs(x);
  if (y <= kThresh) {
    const double z = y > kXSmall ? y * y : 0.0;
    double xnum = kA[4] * z;
    double xden = z;
    for (int i = 0; i < 3; ++i) {
      xnum = (xnum + kA[i]) * z;
      xden = (xden + kB[i]) * z;
    }
    return 1.0 - x * (xnum + kA[3]) / (xden + kB[3]);
  }
  double result;
  if (y <= 4.0) {
    double xnum = kC[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + kC[i]) * y;
      xden = (xden + kD[i]) * y;
    }
    result = scaled_exp(y, (xnum + kC[7]) / (xden + kD[7]));
  } else if (y < 26.6) {
    const double ysq = 1.0 / (y * y);
    double xnum = kP[5] * ysq;
    double xden = ysq;
    for (int i = 0; i < 4; ++i) {
      xnum = (xnum + kP[i]) * ysq;
      xden = (xden + kQ[i]) * ysq;
    }
    result = ysq * (xnum + kP[4]) / (xden + kQ[4]);
    result = scaled_exp(y, (kInvSqrtPi - result) / y);
  } else {
    result = 0.0;  // underflow region
  }
  return x < 0.0 ? 2.0 - result : result;
}

Probability normal_cdf(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("normal_cdf: input is not finite");
  }
  return Probability(0.5 * erfc_cody(-x / kSqrt2));
}

Probability two_sided_p(double t) {
  if (!std::isfinite(t)) {
    throw DomainError("two_sided_p: input is not finite");
  }
  return Probability(erfc_cody(std::fabs(t) / kSqrt2));
}

}  // namespace hetseq
