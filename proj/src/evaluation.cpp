#include "gmnb/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gmnb/errors.hpp"

namespace gmnb {

namespace {

struct SweepInput {
  std::vector<int> order;  // indices by descending score
  std::int64_t n_pos = 0;
  std::int64_t n_neg = 0;
};

SweepInput prepare(const std::vector<double>& scores, const std::vector<bool>& truth) {
  if (scores.size() != truth.size())
    throw validation_error("curve: scores and truth differ in length");
  if (scores.empty()) throw validation_error("curve: empty input");
  SweepInput in;
  for (const bool v : truth) (v ? in.n_pos : in.n_neg) += 1;
  if (in.n_pos == 0 || in.n_neg == 0)
    throw validation_error("curve: need at least one positive and one negative label");
  in.order.resize(scores.size());
  std::iota(in.order.begin(), in.order.end(), 0);
  std::stable_sort(in.order.begin(), in.order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  return in;
}

double trapezoid(const std::vector<std::pair<double, double>>& pts) {
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    area += (pts[i].first - pts[i - 1].first) * 0.5 * (pts[i].second + pts[i - 1].second);
  return area;
}

}  // namespace

CurveResult roc_curve(const std::vector<double>& scores, const std::vector<bool>& truth) {
  const SweepInput in = prepare(scores, truth);
  CurveResult out;
  out.n_positives = in.n_pos;
  out.n_negatives = in.n_neg;
  out.points.emplace_back(0.0, 0.0);
  std::int64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < in.order.size()) {
    const double s = scores[in.order[i]];
    while (i < in.order.size() && scores[in.order[i]] == s) {
      if (truth[in.order[i]])
        ++tp;
      else
        ++fp;
      ++i;
    }
    out.points.emplace_back(static_cast<double>(fp) / static_cast<double>(in.n_neg),
                            static_cast<double>(tp) / static_cast<double>(in.n_pos));
  }
  out.auc = trapezoid(out.points);
  return out;
}

CurveResult pr_curve(const std::vector<double>& scores, const std::vector<bool>& truth) {
  const SweepInput in = prepare(scores, truth);
  CurveResult out;
  out.n_positives = in.n_pos;
  out.n_negatives = in.n_neg;
  std::int64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < in.order.size()) {
    const double s = scores[in.order[i]];
    while (i < in.order.size() && scores[in.order[i]] == s) {
      if (truth[in.order[i]])
        ++tp;
      else
        ++fp;
      ++i;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(in.n_pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (out.points.empty()) out.points.emplace_back(0.0, precision);  // recall-0 anchor
    out.points.emplace_back(recall, precision);
  }
  out.auc = trapezoid(out.points);
  return out;
}

std::pair<double, double> aggregate_runs(const std::vector<double>& aucs) {
  if (aucs.size() < 2) throw validation_error("aggregate_runs: need at least 2 results");
  const double n = static_cast<double>(aucs.size());
  double mean = 0.0;
  for (const double v : aucs) mean += v;
  mean /= n;
  double ss = 0.0;
  for (const double v : aucs) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace gmnb
