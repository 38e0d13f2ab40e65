#ifndef PAIRLABEL_BOUNDS_H_
#define PAIRLABEL_BOUNDS_H_

#include <cstddef>

namespace pairlabel::bounds {

// Every logarithm in this header is natural.

// Smallest delegation size t with exp(-2 t (0.5 - eps1)^2) <= 1/2:
// ceil(ln 2 / (2 (0.5 - eps1)^2)). required_t(0.4) == 35.
std::size_t RequiredT(double eps1);

// a = exp(-2 t (0.5 - eps1)^2), the Hoeffding bound on the probability that
// a point outside the delegation set is mislabeled by the vote.
double HoeffdingA(std::size_t t, double eps1);

// delta = 1 - (1 - (ln n)^(-C2)) * exp(-a (a + 1) (n - t)), clamped to
// [0, 1]. Requires n > t and C2 > 0.
double FailureDelta(std::size_t n, std::size_t t, double eps1, double c2);

// ceil(C1 * max(ln ln n, ln t) / (0.5 - eps2)^2), at least 1. Requires
// n >= 3, t >= 2, eps2 in [0, 0.5), C1 > 0.
std::size_t RequiredM(std::size_t n, std::size_t t, double eps2, double c1);

// Number of active-learning rounds ceil(ln(1 / epsilon)); epsilon in (0, 1).
std::size_t ActiveSteps(double epsilon);
// Per-round precision 1 / 2^(i + 2), rounds numbered from 1.
double StepPrecision(std::size_t round);

struct KnnBoundParams {
  double label_error = 0.0;  // error rate of the inferred labels, in [0, 1]
  std::size_t k = 5;
  std::size_t n = 1;
  double omega = 1.0;    // smoothness scale, > 0
  double lambda = 1.0;   // smoothness exponent, > 0
  double alpha = 0.0;    // margin exponent, >= 0
  double c_alpha = 1.0;  // margin constant, >= 1
  double delta_prime = 0.05;
};

struct KnnBound {
  double excess_risk = 0.0;
  // False when k lies outside [4 ln(1/delta') + 1, n / 2], where the bound is
  // not guaranteed. The value is still computed.
  bool k_in_valid_range = true;
};

// C_alpha * (2 eps / k + omega (2k / n)^lambda)^(alpha + 1).
KnnBound KnnExcessRiskBound(const KnnBoundParams& p);

}  // namespace pairlabel::bounds

#endif  // PAIRLABEL_BOUNDS_H_
