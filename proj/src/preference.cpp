#include "gdm/preference.hpp"

#include <algorithm>
#include <cmath>

#include "gdm/error.hpp"

namespace gdm::preference {

namespace {

Error invalid(const std::string& msg) { return Error(ErrorKind::Validation, msg); }

}  // namespace

NormalizedFeatures normalize_features(const std::vector<FeatureSpec>& features,
                                      const std::vector<Alternative>& alternatives) {
  if (alternatives.empty()) throw invalid("no alternatives to normalize");
  NormalizedFeatures out;
  out.matrix.assign(alternatives.size(), std::vector<int>(features.size(), 0));

  for (std::size_t k = 0; k < features.size(); ++k) {
    const auto& f = features[k];
    std::vector<double> column;
    column.reserve(alternatives.size());
    for (const auto& alt : alternatives) {
      auto it = alt.values.find(f.id);
      if (it == alt.values.end()) {
        throw invalid("incomplete alternative: '" + alt.id + "' has no value for '" + f.id + "'");
      }
      if (!std::isfinite(it->second)) {
        throw invalid("alternative '" + alt.id + "': value for '" + f.id + "' is not finite");
      }
      column.push_back(it->second);
    }

    if (f.kind == FeatureKind::Binary) {
      for (std::size_t i = 0; i < column.size(); ++i) {
        if (column[i] != 0.0 && column[i] != 1.0) {
          throw invalid("alternative '" + alternatives[i].id + "': binary feature '" + f.id + "' must be 0 or 1");
        }
        out.matrix[i][k] = column[i] == 1.0 ? 1 : 0;
      }
      continue;
    }

    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    if (*lo == *hi) {
      out.warnings.push_back("feature '" + f.id + "' has the same value for every alternative; normalized to 0");
      continue;
    }
    double sum = 0.0;
    for (double v : column) sum += v;
    const double mean = sum / static_cast<double>(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
      const bool favourable = f.direction == Direction::AboveMean ? column[i] > mean : column[i] < mean;
      out.matrix[i][k] = favourable ? 1 : 0;
    }
  }
  return out;
}

int raw_preference(const std::vector<int>& f, const std::vector<int>& z) {
  if (f.size() != z.size()) {
    throw invalid("feature row has " + std::to_string(f.size()) + " entries, assessment has " +
                  std::to_string(z.size()));
  }
  int sum = 0;
  for (std::size_t k = 0; k < f.size(); ++k) sum += f[k] * z[k];
  return sum;
}

double scale_preference(int raw) noexcept { return std::clamp(50.0 + 10.0 * raw, 0.0, 100.0); }

PreferenceMatrix aggregate(const std::vector<std::vector<int>>& features,
                           const std::vector<std::vector<int>>& assessments,
                           const std::vector<std::vector<double>>& sentiment, std::vector<double> weights) {
  const std::size_t m = assessments.size();
  const std::size_t n = features.size();
  if (m == 0) throw Error(ErrorKind::Precondition, "empty panel");
  if (sentiment.size() != m) throw invalid("sentiment rows do not match the panel");
  if (weights.empty()) weights.assign(m, 1.0);
  if (weights.size() != m) throw invalid("one weight per participant is required");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw invalid("participant weights must be finite and non-negative");
    total += w;
  }
  if (total <= 0.0) throw invalid("participant weights sum to zero");

  PreferenceMatrix pm;
  pm.raw.assign(m, std::vector<int>(n, 0));
  pm.scaled.assign(m, std::vector<double>(n, 0.0));
  pm.sentiment.assign(m, std::vector<double>(n, 0.0));
  pm.voting.assign(n, 0.0);
  pm.collective_sentiment.assign(n, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (sentiment[j].size() != n) throw invalid("sentiment row does not match the alternatives");
    for (std::size_t i = 0; i < n; ++i) {
      pm.raw[j][i] = raw_preference(features[i], assessments[j]);
      pm.scaled[j][i] = scale_preference(pm.raw[j][i]);
      pm.sentiment[j][i] = std::clamp(sentiment[j][i], -1.0, 1.0);
      pm.voting[i] += weights[j] * pm.scaled[j][i];
      pm.collective_sentiment[i] += weights[j] * pm.sentiment[j][i];
    }
  }
  // Dividing once at the end keeps uniform panels exact (310 / 5 == 62).
  for (std::size_t i = 0; i < n; ++i) {
    pm.voting[i] /= total;
    pm.collective_sentiment[i] /= total;
  }
  for (double& w : weights) w /= total;
  pm.weights = std::move(weights);
  return pm;
}

}  // namespace gdm::preference
