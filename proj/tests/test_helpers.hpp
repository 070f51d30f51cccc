#pragma once

// Shared builders for small hand-made datasets used across test files.

#include <cstdint>
#include <string>
#include <vector>

#include "gmnb/count_data.hpp"

namespace test_helpers {

// A dense tensor with the same number of samples at every time point.
// counts[k][t][j] layout provided flat per (t) as the library expects.
inline gmnb::CountTensor make_tensor(int K, const std::vector<double>& times, int J,
                                     std::int64_t fill = 0, int condition = 1) {
  gmnb::CountTensor ct;
  ct.time_labels = times;
  ct.gene_ids.resize(K);
  for (int k = 0; k < K; ++k) ct.gene_ids[k] = "g" + std::to_string(k + 1);
  const int T1 = static_cast<int>(times.size());
  ct.samples.resize(T1);
  ct.counts.resize(T1);
  for (int t = 0; t < T1; ++t) {
    ct.samples[t].resize(J);
    for (int j = 0; j < J; ++j) {
      ct.samples[t][j].column_name = "t" + std::to_string(t) + "_r" + std::to_string(j + 1);
      ct.samples[t][j].condition = condition;
      ct.samples[t][j].replicate = j + 1;
    }
    ct.counts[t].assign(static_cast<std::size_t>(K) * J, fill);
  }
  return ct;
}

}  // namespace test_helpers
