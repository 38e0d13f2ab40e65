#include "pairlabel/oracle.h"

#include <string>

#include "pairlabel/errors.h"

namespace pairlabel {

Sign CountedOracle::Compare(OracleKind kind, const DataPoint& left,
                            const DataPoint& right) {
  if (left.id == right.id) {
    throw ParameterError("cannot compare point " + std::to_string(left.id) +
                         " with itself");
  }
  stats_.Record(kind);
  return inner_.Compare(kind, left, right);
}

}  // namespace pairlabel
