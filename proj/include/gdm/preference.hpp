#pragma once

#include <map>
#include <string>
#include <vector>

namespace gdm::preference {

enum class FeatureKind { Continuous, Binary };

/// Which side of the mean counts as favourable for a continuous feature.
enum class Direction { AboveMean, BelowMean };

struct FeatureSpec {
  std::string id;
  FeatureKind kind = FeatureKind::Binary;
  Direction direction = Direction::AboveMean;  ///< ignored for binary features

  bool operator==(const FeatureSpec&) const = default;
};

struct Alternative {
  std::string id;
  std::string label;
  std::map<std::string, double> values;  ///< feature id -> value

  bool operator==(const Alternative&) const = default;
};

/// Boolean feature matrix F[i][k] (alternative i, feature k) plus notes about
/// degenerate columns.
struct NormalizedFeatures {
  std::vector<std::vector<int>> matrix;
  std::vector<std::string> warnings;
};

/// Continuous features become 1 strictly on the favourable side of the
/// column mean, 0 otherwise (including exactly at the mean). Binary features
/// pass through and must be 0 or 1.
NormalizedFeatures normalize_features(const std::vector<FeatureSpec>& features,
                                      const std::vector<Alternative>& alternatives);

/// Dot product of a boolean feature row with an assessment row.
int raw_preference(const std::vector<int>& f, const std::vector<int>& z);

/// 50 + 10 raw, clamped to [0, 100].
double scale_preference(int raw) noexcept;

/// Aggregated panel view. Rows are participants (j), columns alternatives (i).
struct PreferenceMatrix {
  std::vector<std::vector<int>> raw;
  std::vector<std::vector<double>> scaled;
  std::vector<std::vector<double>> sentiment;  ///< SP per (participant, alternative)
  std::vector<double> weights;                 ///< normalised, sums to 1
  std::vector<double> voting;                  ///< V_i in [0, 100]
  std::vector<double> collective_sentiment;    ///< S_i in [-1, 1]

  bool operator==(const PreferenceMatrix&) const = default;
};

/// Weights are non-negative and rescaled to sum to 1; an empty vector means
/// uniform. Rows of `assessments` and `sentiment` follow participant order.
PreferenceMatrix aggregate(const std::vector<std::vector<int>>& features,
                           const std::vector<std::vector<int>>& assessments,
                           const std::vector<std::vector<double>>& sentiment,
                           std::vector<double> weights = {});

}  // namespace gdm::preference
