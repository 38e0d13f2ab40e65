#ifndef PAIRLABEL_SIM_ORACLE_H_
#define PAIRLABEL_SIM_ORACLE_H_

#include "pairlabel/oracle.h"
#include "pairlabel/rng.h"
#include "pairlabel/types.h"

namespace pairlabel {

// Per-oracle flip probabilities. Both must lie in [0, 0.5).
struct NoiseSpec {
  double eps1 = 0.0;  // positivity
  double eps2 = 0.0;  // ambiguity

  void Validate() const;
};

// Answers by the eta ordering, then flips with probability eps. Exact ties
// are answered with a fair coin and never flipped. Throws ConfigError when a
// point has no eta.
Sign SimulatePositivity(const DataPoint& x1, const DataPoint& x2, double eps1,
                        Rng& rng);
// Same with key |eta - 0.5|; kPlus iff x1 has the strictly smaller key.
Sign SimulateAmbiguity(const DataPoint& x1, const DataPoint& x2, double eps2,
                       Rng& rng);

class SimulatedOracle : public ComparisonOracle {
 public:
  SimulatedOracle(NoiseSpec noise, Rng rng);

  Sign Compare(OracleKind kind, const DataPoint& left,
               const DataPoint& right) override;

  const NoiseSpec& noise() const { return noise_; }

 private:
  NoiseSpec noise_;
  Rng rng_;
};

}  // namespace pairlabel

#endif  // PAIRLABEL_SIM_ORACLE_H_
