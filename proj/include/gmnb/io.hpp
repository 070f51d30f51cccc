#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmnb/bayes_factor.hpp"
#include "gmnb/count_data.hpp"
#include "gmnb/evaluation.hpp"
#include "gmnb/model.hpp"
#include "gmnb/synthetic.hpp"

namespace gmnb {

// Every output file starts with '#' comment lines recording the tool
// version, the fully resolved configuration and the seed. No timestamps:
// reruns with the same seed must be byte-identical.
struct FileHeader {
  std::string config;  // resolved key=value pairs, deterministic order
  std::uint64_t seed = 0;
};

std::string format_double(double v);  // %.17g, round-trip exact

// --- count matrices -------------------------------------------------------
// Tab-delimited matrix: header `gene_id` then one column per sample named
// t<index>_r<replicate>; companion metadata file with columns
// (column_name, time_value, condition, replicate).
void write_count_matrix(const std::string& counts_path, const std::string& meta_path,
                        const CountTensor& data, const FileHeader& header);
CountTensor read_count_matrix(const std::string& counts_path, const std::string& meta_path);

// Derives "<x>.meta.tsv" from "<x>.counts.tsv"; identity-ish fallback
// appends ".meta.tsv" when the pattern does not match.
std::string default_meta_path(const std::string& counts_path);

// --- simulation sidecars ---------------------------------------------------
void write_truth(const std::string& path, const LabeledDataset& ds, const FileHeader& header);
// pairs of (gene_id, is_de) in file order
std::vector<std::pair<std::string, bool>> read_truth(const std::string& path);
void write_param_record(const std::string& path, const LabeledDataset& ds,
                        const FileHeader& header);

// --- reports ----------------------------------------------------------------
void write_bf_report(const std::string& path, const BfReport& report, const FileHeader& header);
BfReport read_bf_report(const std::string& path);

void write_curve(const std::string& path, const CurveResult& curve, const FileHeader& header);

struct AucSummaryRow {
  std::string method;
  std::string generator;
  std::string metric;  // "roc" or "pr"
  double mean = 0.0;
  double sd = 0.0;
  int n_runs = 0;
};
void write_auc_summary(const std::string& path, const std::vector<AucSummaryRow>& rows,
                       const FileHeader& header);

// Posterior mean and credible interval of the dispersion trajectories.
void write_r_summary(const std::string& path, const CountTensor& data, const RSummary& summary,
                     const FileHeader& header);

void write_loglik_trace(const std::string& path, const PosteriorSamples& samples,
                        const FileHeader& header);

// --- chain-state checkpoints (bit-exact round trip) -------------------------
void write_chain_state(const std::string& path, const ChainState& state);
ChainState read_chain_state(const std::string& path);

}  // namespace gmnb
