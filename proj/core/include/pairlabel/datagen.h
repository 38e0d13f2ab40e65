#ifndef PAIRLABEL_DATAGEN_H_
#define PAIRLABEL_DATAGEN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pairlabel/knn.h"
#include "pairlabel/rng.h"
#include "pairlabel/types.h"

namespace pairlabel {

// Equal-weight mixture of N((2,2), I) and N((-2,-2), I).
struct GaussianMixtureSpec {
  std::size_t n = 10000;
  std::uint64_t seed = 0;
};

// Bayes posterior of the mixture above: 1 / (1 + exp(-4 (x1 + x2))).
double TwoGaussianPosterior(double x1, double x2);

// Draws the component with a fair coin, then the point. eta is the analytic
// posterior and true_label the sign of the drawing component, so true_label
// disagrees with the Bayes label for a small fraction of points.
Dataset GenTwoGaussians(const GaussianMixtureSpec& spec);
// Same, drawing from an existing generator (for streaming sources).
std::vector<DataPoint> DrawTwoGaussians(std::size_t n, Rng& rng,
                                        PointId first_id = 0);

// pos / total. Throws ParameterError unless 0 <= pos <= total and total > 0.
double EmpiricalEtaFromVotes(long pos_votes, long total);

// Midpoint of the stage's posterior quintile: (5.5 - stage) / 5, so stage 1
// maps to 0.9 and stage 5 to 0.1. Throws ParameterError outside 1..5.
double EtaFromStage(int stage);

// CSV with header `id,f0,...,f{d-1}[,eta][,label][,payload_ref]`. Lines
// starting with '#' are ignored. Numbers use '.' and are parsed and printed
// independently of the locale; doubles are printed in shortest round-trip
// form. Empty optional cells mean "absent".
Dataset ReadDatasetCsv(std::istream& in);
Dataset LoadDatasetCsv(const std::filesystem::path& path);
void WriteDatasetCsv(std::ostream& out, const Dataset& data,
                     const std::string& comment = {});
void SaveDatasetCsv(const std::filesystem::path& path, const Dataset& data,
                    const std::string& comment = {});

// Greedy k-medoids seeding: repeatedly adds the point that minimizes the sum
// over all points of the distance to the nearest selected point. Ties go to
// the lower id. Returns ids in selection order.
std::vector<PointId> GreedyMedoids(const Dataset& data, std::size_t count,
                                   Metric metric = Metric::kEuclidean);

// Sum over all points of the distance to the nearest listed medoid.
double MedoidCost(const Dataset& data, std::span<const PointId> medoids);

// Shuffles ids and splits them so that the first part holds
// round(n * train_fraction) points (at least 1, at most n - 1 when n > 1).
struct Split {
  std::vector<PointId> train;
  std::vector<PointId> test;
};
Split TrainTestSplit(std::size_t n, double train_fraction, Rng& rng);

}  // namespace pairlabel

#endif  // PAIRLABEL_DATAGEN_H_
