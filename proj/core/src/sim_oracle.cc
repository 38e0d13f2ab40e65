#include "pairlabel/sim_oracle.h"

#include <cmath>
#include <string>

#include "pairlabel/errors.h"

namespace pairlabel {
namespace {

double RequireEta(const DataPoint& p) {
  if (!p.eta) {
    throw ConfigError("simulated oracle needs eta for point " +
                      std::to_string(p.id));
  }
  return *p.eta;
}

void CheckEps(double eps, const char* name) {
  if (!(eps >= 0.0 && eps < 0.5)) {
    throw ParameterError(std::string(name) + " must lie in [0, 0.5), got " +
                         std::to_string(eps));
  }
}

// `first_wins` is the noiseless answer for a strict order; `tie` marks equal
// keys.
Sign NoisyAnswer(bool tie, bool first_wins, double eps, Rng& rng) {
  if (tie) return rng.CoinFlip();
  Sign truth = first_wins ? Sign::kPlus : Sign::kMinus;
  if (eps > 0.0 && rng.Bernoulli(eps)) truth = Negate(truth);
  return truth;
}

}  // namespace

void NoiseSpec::Validate() const {
  CheckEps(eps1, "eps1");
  CheckEps(eps2, "eps2");
}

Sign SimulatePositivity(const DataPoint& x1, const DataPoint& x2, double eps1,
                        Rng& rng) {
  CheckEps(eps1, "eps1");
  const double a = RequireEta(x1);
  const double b = RequireEta(x2);
  return NoisyAnswer(a == b, a > b, eps1, rng);
}

Sign SimulateAmbiguity(const DataPoint& x1, const DataPoint& x2, double eps2,
                       Rng& rng) {
  CheckEps(eps2, "eps2");
  const double a = std::abs(RequireEta(x1) - 0.5);
  const double b = std::abs(RequireEta(x2) - 0.5);
  return NoisyAnswer(a == b, a < b, eps2, rng);
}

SimulatedOracle::SimulatedOracle(NoiseSpec noise, Rng rng)
    : noise_(noise), rng_(rng) {
  noise_.Validate();
}

Sign SimulatedOracle::Compare(OracleKind kind, const DataPoint& left,
                              const DataPoint& right) {
  return kind == OracleKind::kPositivity
             ? SimulatePositivity(left, right, noise_.eps1, rng_)
             : SimulateAmbiguity(left, right, noise_.eps2, rng_);
}

}  // namespace pairlabel
