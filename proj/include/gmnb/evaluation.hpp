#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace gmnb {

struct CurveResult {
  std::vector<std::pair<double, double>> points;  // (FPR,TPR) or (recall,precision)
  double auc = 0.0;                               // trapezoid over the stored points
  std::int64_t n_positives = 0;
  std::int64_t n_negatives = 0;
};

// Threshold sweep over descending scores; tied scores collapse into a
// single operating point. Requires at least one positive and one negative.
CurveResult roc_curve(const std::vector<double>& scores, const std::vector<bool>& truth);

// Precision-recall analogue, trapezoid over the achievable points with a
// (0, precision-of-first-group) anchor so recall spans [0, 1].
CurveResult pr_curve(const std::vector<double>& scores, const std::vector<bool>& truth);

// Sample mean and sample standard deviation of the AUCs; needs >= 2 runs.
std::pair<double, double> aggregate_runs(const std::vector<double>& aucs);

}  // namespace gmnb
