#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gmnb {

struct SampleInfo {
  std::string column_name;  // e.g. "t0_r1"
  int condition = 1;        // 1 or 2
  int replicate = 1;
};

// Read counts for K genes over T+1 time points, with a possibly ragged
// number of samples per time point. counts[t] is a K x J_t row-major block.
struct CountTensor {
  std::vector<std::string> gene_ids;              // K
  std::vector<double> time_labels;                // T+1, strictly increasing
  std::vector<std::vector<SampleInfo>> samples;   // [t][j]
  std::vector<std::vector<std::int64_t>> counts;  // [t] -> K x J_t

  int n_genes() const { return static_cast<int>(gene_ids.size()); }
  int n_times() const { return static_cast<int>(time_labels.size()); }
  int n_samples(int t) const { return static_cast<int>(samples[t].size()); }

  std::int64_t at(int k, int t, int j) const {
    return counts[t][static_cast<std::size_t>(k) * samples[t].size() + j];
  }
  std::int64_t& at(int k, int t, int j) {
    return counts[t][static_cast<std::size_t>(k) * samples[t].size() + j];
  }

  std::int64_t total_cells() const {
    std::int64_t c = 0;
    for (int t = 0; t < n_times(); ++t) c += static_cast<std::int64_t>(n_genes()) * n_samples(t);
    return c;
  }

  bool gene_all_zero(int k) const;
  double gene_mean_count(int k) const;

  // Throws validation_error on shape problems, negative counts,
  // non-increasing time labels, or an empty time point.
  void validate() const;
};

// Fixed hyperparameters of the Beta/Gamma priors. Defaults are weakly
// informative and overridable from the CLI.
struct GmnbHyper {
  double a0 = 1.0;      // Beta prior on p
  double b0 = 1.0;
  double e_init = 1.0;  // Gamma prior on the first-time-point dispersion
  double f_init = 1.0;
  double c0 = 1.0;      // Gamma prior on the chain rate c_k
  double d0 = 1.0;

  void validate() const;  // all six strictly positive
};

}  // namespace gmnb
