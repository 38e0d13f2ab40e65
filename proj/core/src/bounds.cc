#include "pairlabel/bounds.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "pairlabel/errors.h"

namespace pairlabel::bounds {
namespace {

// Rounds up, treating values within a few ulps above an integer as that
// integer so that e.g. ln(ln(e^e)) / 0.25 gives 4 rather than 5.
std::size_t CeilTolerant(double x) {
  const double slack = 1e-9 * std::max(1.0, std::abs(x));
  return static_cast<std::size_t>(std::ceil(x - slack));
}

void CheckNoise(double eps, const char* name) {
  if (!(eps >= 0.0 && eps < 0.5)) {
    throw ParameterError(std::string(name) + " must lie in [0, 0.5), got " +
                         std::to_string(eps));
  }
}

}  // namespace

std::size_t RequiredT(double eps1) {
  CheckNoise(eps1, "eps1");
  const double gap = 0.5 - eps1;
  return std::max<std::size_t>(1, CeilTolerant(std::log(2.0) / (2 * gap * gap)));
}

double HoeffdingA(std::size_t t, double eps1) {
  if (!(eps1 >= 0.0 && eps1 <= 0.5)) {
    throw ParameterError("eps1 must lie in [0, 0.5]");
  }
  const double gap = 0.5 - eps1;
  return std::exp(-2.0 * static_cast<double>(t) * gap * gap);
}

double FailureDelta(std::size_t n, std::size_t t, double eps1, double c2) {
  if (n <= t) throw ParameterError("failure_delta requires n > t");
  if (!(c2 > 0)) throw ParameterError("C2 must be positive");
  CheckNoise(eps1, "eps1");
  const double a = HoeffdingA(t, eps1);
  const double selection_ok = 1.0 - std::pow(std::log(static_cast<double>(n)), -c2);
  const double votes_ok =
      std::exp(-a * (a + 1.0) * static_cast<double>(n - t));
  return std::clamp(1.0 - selection_ok * votes_ok, 0.0, 1.0);
}

std::size_t RequiredM(std::size_t n, std::size_t t, double eps2, double c1) {
  if (n < 3) throw ParameterError("required_m needs n >= 3 for ln ln n");
  if (t < 2) throw ParameterError("required_m needs t >= 2");
  if (!(c1 > 0)) throw ParameterError("C1 must be positive");
  CheckNoise(eps2, "eps2");
  const double gap = 0.5 - eps2;
  const double lnln = std::log(std::log(static_cast<double>(n)));
  const double lnt = std::log(static_cast<double>(t));
  return std::max<std::size_t>(
      1, CeilTolerant(c1 * std::max(lnln, lnt) / (gap * gap)));
}

std::size_t ActiveSteps(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError("epsilon must lie in (0, 1)");
  }
  return std::max<std::size_t>(1, CeilTolerant(std::log(1.0 / epsilon)));
}

double StepPrecision(std::size_t round) {
  if (round < 1) throw ParameterError("rounds are numbered from 1");
  return std::ldexp(1.0, -static_cast<int>(round + 2));
}

KnnBound KnnExcessRiskBound(const KnnBoundParams& p) {
  if (!(p.label_error >= 0.0 && p.label_error <= 1.0)) {
    throw ParameterError("label error must lie in [0, 1]");
  }
  if (p.k < 1 || p.n < 1) throw ParameterError("k and n must be positive");
  if (!(p.omega > 0)) throw ParameterError("omega must be positive");
  if (!(p.lambda > 0)) throw ParameterError("lambda must be positive");
  if (!(p.alpha >= 0)) throw ParameterError("alpha must be nonnegative");
  if (!(p.c_alpha >= 1)) throw ParameterError("C_alpha must be at least 1");
  if (!(p.delta_prime > 0 && p.delta_prime < 1)) {
    throw ParameterError("delta' must lie in (0, 1)");
  }
  const double k = static_cast<double>(p.k);
  const double n = static_cast<double>(p.n);
  const double base =
      2.0 * p.label_error / k + p.omega * std::pow(2.0 * k / n, p.lambda);
  KnnBound out;
  out.excess_risk = p.c_alpha * std::pow(base, p.alpha + 1.0);
  out.k_in_valid_range =
      k >= 4.0 * std::log(1.0 / p.delta_prime) + 1.0 && k <= n / 2.0;
  return out;
}

}  // namespace pairlabel::bounds
