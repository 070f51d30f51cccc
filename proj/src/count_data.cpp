#include "gmnb/count_data.hpp"

#include <string>

#include "gmnb/errors.hpp"

namespace gmnb {

bool CountTensor::gene_all_zero(int k) const {
  for (int t = 0; t < n_times(); ++t)
    for (int j = 0; j < n_samples(t); ++j)
      if (at(k, t, j) != 0) return false;
  return true;
}

double CountTensor::gene_mean_count(int k) const {
  double sum = 0.0;
  std::int64_t cells = 0;
  for (int t = 0; t < n_times(); ++t) {
    for (int j = 0; j < n_samples(t); ++j) sum += static_cast<double>(at(k, t, j));
    cells += n_samples(t);
  }
  return cells > 0 ? sum / static_cast<double>(cells) : 0.0;
}

void CountTensor::validate() const {
  if (gene_ids.empty()) throw validation_error("count tensor: no genes");
  if (time_labels.empty()) throw validation_error("count tensor: no time points");
  if (samples.size() != time_labels.size() || counts.size() != time_labels.size())
    throw validation_error("count tensor: per-time blocks do not match time labels");
  for (std::size_t t = 1; t < time_labels.size(); ++t) {
    if (!(time_labels[t] > time_labels[t - 1]))
      throw validation_error("count tensor: time labels must be strictly increasing");
  }
  for (int t = 0; t < n_times(); ++t) {
    if (samples[t].empty())
      throw validation_error("count tensor: time point " + std::to_string(t) + " has no samples");
    const auto expect = static_cast<std::size_t>(n_genes()) * samples[t].size();
    if (counts[t].size() != expect)
      throw validation_error("count tensor: count block size mismatch at time " +
                             std::to_string(t));
    for (const auto v : counts[t])
      if (v < 0) throw validation_error("count tensor: negative count");
  }
}

void GmnbHyper::validate() const {
  if (!(a0 > 0 && b0 > 0 && e_init > 0 && f_init > 0 && c0 > 0 && d0 > 0))
    throw validation_error("hyperparameters must all be strictly positive");
}

}  // namespace gmnb
