#include "pairlabel/datagen.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>
#include <unordered_set>

#include "pairlabel/errors.h"
#include "pairlabel/text.h"

namespace pairlabel {
namespace {

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double ParseDoubleCell(std::string_view cell, std::string_view column,
                       std::size_t line) {
  double v = 0;
  if (!text::ParseDouble(cell, v)) {
    throw DataError("column '" + std::string(column) + "': '" +
                        std::string(cell) + "' is not a number",
                    line);
  }
  return v;
}

struct Layout {
  std::size_t dim = 0;
  bool eta = false;
  bool label = false;
  bool payload = false;
  std::vector<std::string> names;
};

Layout ParseHeader(std::string_view header, std::size_t line) {
  Layout layout;
  const auto cells = SplitCommas(header);
  if (cells.empty() || cells[0] != "id") {
    throw DataError("header must start with 'id'", line);
  }
  std::size_t i = 1;
  while (i < cells.size() && cells[i] == "f" + std::to_string(layout.dim)) {
    ++layout.dim;
    ++i;
  }
  if (i < cells.size() && cells[i] == "eta") layout.eta = true, ++i;
  if (i < cells.size() && cells[i] == "label") layout.label = true, ++i;
  if (i < cells.size() && cells[i] == "payload_ref") layout.payload = true, ++i;
  if (i != cells.size()) {
    throw DataError("unexpected header column '" + std::string(cells[i]) +
                        "'; expected id,f0..f{d-1}[,eta][,label][,payload_ref]",
                    line);
  }
  for (auto c : cells) layout.names.emplace_back(c);
  return layout;
}

}  // namespace

double TwoGaussianPosterior(double x1, double x2) {
  return 1.0 / (1.0 + std::exp(-4.0 * (x1 + x2)));
}

std::vector<DataPoint> DrawTwoGaussians(std::size_t n, Rng& rng,
                                        PointId first_id) {
  std::vector<DataPoint> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Sign component = rng.CoinFlip();
    const double mu = 2.0 * ToInt(component);
    const double x1 = mu + rng.Normal();
    const double x2 = mu + rng.Normal();
    DataPoint p;
    p.id = first_id + i;
    p.features = {x1, x2};
    p.eta = TwoGaussianPosterior(x1, x2);
    p.true_label = component;
    points.push_back(std::move(p));
  }
  return points;
}

Dataset GenTwoGaussians(const GaussianMixtureSpec& spec) {
  if (spec.n < 1) throw ParameterError("n must be at least 1");
  Rng rng = Rng(spec.seed).Fork(streams::kData);
  return Dataset(DrawTwoGaussians(spec.n, rng));
}

double EmpiricalEtaFromVotes(long pos_votes, long total) {
  if (total <= 0) throw ParameterError("vote total must be positive");
  if (pos_votes < 0 || pos_votes > total) {
    throw ParameterError("positive votes must lie in [0, total]");
  }
  return static_cast<double>(pos_votes) / static_cast<double>(total);
}

double EtaFromStage(int stage) {
  if (stage < 1 || stage > 5) {
    throw ParameterError("stage must lie in 1..5, got " + std::to_string(stage));
  }
  return (5.5 - stage) / 5.0;
}

Dataset ReadDatasetCsv(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::optional<Layout> layout;
  std::vector<DataPoint> points;
  std::unordered_set<std::size_t> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!layout) {
      layout = ParseHeader(line, line_no);
      continue;
    }
    const auto cells = SplitCommas(line);
    if (cells.size() != layout->names.size()) {
      throw DataError("expected " + std::to_string(layout->names.size()) +
                          " fields, found " + std::to_string(cells.size()),
                      line_no);
    }
    DataPoint p;
    std::size_t id = 0;
    if (!text::ParseSize(cells[0], id)) {
      throw DataError("id '" + std::string(cells[0]) + "' is not an integer",
                      line_no);
    }
    if (!seen.insert(id).second) {
      throw DataError("duplicate id " + std::to_string(id), line_no);
    }
    p.id = id;
    std::size_t c = 1;
    p.features.reserve(layout->dim);
    for (std::size_t f = 0; f < layout->dim; ++f, ++c) {
      p.features.push_back(ParseDoubleCell(cells[c], layout->names[c], line_no));
    }
    if (layout->eta) {
      if (!cells[c].empty()) {
        const double eta = ParseDoubleCell(cells[c], "eta", line_no);
        if (!(eta >= 0.0 && eta <= 1.0)) {
          throw DataError("eta " + std::string(cells[c]) + " outside [0,1]",
                          line_no);
        }
        p.eta = eta;
      }
      ++c;
    }
    if (layout->label) {
      const auto cell = cells[c];
      if (cell == "1" || cell == "+1") {
        p.true_label = Sign::kPlus;
      } else if (cell == "-1") {
        p.true_label = Sign::kMinus;
      } else if (!cell.empty()) {
        throw DataError("label '" + std::string(cell) + "' is not +1 or -1",
                        line_no);
      }
      ++c;
    }
    if (layout->payload && !cells[c].empty()) {
      p.payload_ref = std::string(cells[c]);
    }
    points.push_back(std::move(p));
  }
  if (!layout) throw DataError("missing header row");
  if (points.empty()) throw DataError("no data rows");
  std::sort(points.begin(), points.end(),
            [](const DataPoint& a, const DataPoint& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].id != i) {
      throw DataError("ids must be dense 0..n-1; id " + std::to_string(i) +
                      " is missing");
    }
  }
  return Dataset(std::move(points));
}

Dataset LoadDatasetCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset '" + path.string() + "'");
  try {
    return ReadDatasetCsv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteDatasetCsv(std::ostream& out, const Dataset& data,
                     const std::string& comment) {
  bool any_eta = false, any_label = false, any_payload = false;
  for (const auto& p : data.points()) {
    any_eta |= p.eta.has_value();
    any_label |= p.true_label.has_value();
    any_payload |= p.payload_ref.has_value();
    if (p.payload_ref && p.payload_ref->find_first_of(",\n\r") != std::string::npos) {
      throw DataError("payload_ref of point " + std::to_string(p.id) +
                      " contains a comma or newline");
    }
  }
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "id";
  for (std::size_t f = 0; f < data.dim(); ++f) out << ",f" << f;
  if (any_eta) out << ",eta";
  if (any_label) out << ",label";
  if (any_payload) out << ",payload_ref";
  out << '\n';
  for (const auto& p : data.points()) {
    out << p.id;
    for (double v : p.features) out << ',' << text::FormatDouble(v);
    if (any_eta) {
      out << ',';
      if (p.eta) out << text::FormatDouble(*p.eta);
    }
    if (any_label) {
      out << ',';
      if (p.true_label) out << ToInt(*p.true_label);
    }
    if (any_payload) {
      out << ',';
      if (p.payload_ref) out << *p.payload_ref;
    }
    out << '\n';
  }
}

void SaveDatasetCsv(const std::filesystem::path& path, const Dataset& data,
                    const std::string& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  WriteDatasetCsv(out, data, comment);
}

namespace {

double PointDistance(const DataPoint& a, const DataPoint& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.features.size(); ++i) {
    const double d = a.features[i] - b.features[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

std::vector<PointId> GreedyMedoids(const Dataset& data, std::size_t count,
                                   Metric /*metric*/) {
  const std::size_t n = data.size();
  if (count > n) {
    throw ParameterError("cannot select " + std::to_string(count) +
                         " medoids from " + std::to_string(n) + " points");
  }
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(n, false);
  std::vector<PointId> out;
  out.reserve(count);
  for (std::size_t round = 0; round < count; ++round) {
    double best_cost = std::numeric_limits<double>::infinity();
    PointId best = n;
    for (PointId c = 0; c < n; ++c) {
      if (chosen[c]) continue;
      double cost = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cost += std::min(nearest[i], PointDistance(data[c], data[i]));
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = c;
      }
    }
    chosen[best] = true;
    out.push_back(best);
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], PointDistance(data[best], data[i]));
    }
  }
  return out;
}

double MedoidCost(const Dataset& data, std::span<const PointId> medoids) {
  if (medoids.empty()) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (const auto& p : data.points()) {
    double best = std::numeric_limits<double>::infinity();
    for (PointId m : medoids) best = std::min(best, PointDistance(p, data[m]));
    total += best;
  }
  return total;
}

Split TrainTestSplit(std::size_t n, double train_fraction, Rng& rng) {
  if (n < 2) throw ParameterError("a split needs at least two points");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ParameterError("train fraction must lie in (0, 1)");
  }
  std::vector<PointId> ids(n);
  for (PointId i = 0; i < n; ++i) ids[i] = i;
  rng.Shuffle(std::span<PointId>(ids));
  auto n_train = static_cast<std::size_t>(std::llround(n * train_fraction));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  Split split;
  split.train.assign(ids.begin(), ids.begin() + n_train);
  split.test.assign(ids.begin() + n_train, ids.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace pairlabel
