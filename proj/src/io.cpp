#include "gmnb/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gmnb/errors.hpp"
#include "gmnb/version.hpp"

namespace gmnb {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open for reading: " + path);
  return in;
}

void write_header(std::ofstream& out, const FileHeader& header) {
  out << "# gmnb " << kVersion << "\n";
  out << "# seed: " << header.seed << "\n";
  if (!header.config.empty()) out << "# config: " << header.config << "\n";
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Next content line: skips '#' comments and blanks, strips trailing '\r'.
bool next_line(std::ifstream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    return true;
  }
  return false;
}

double parse_double(const std::string& s, const std::string& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw io_error("bad numeric field '" + s + "' in " + path);
  }
}

std::int64_t parse_int(const std::string& s, const std::string& path) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw io_error("bad integer field '" + s + "' in " + path);
  }
}

}  // namespace

void write_count_matrix(const std::string& counts_path, const std::string& meta_path,
                        const CountTensor& data, const FileHeader& header) {
  data.validate();
  {
    auto out = open_out(counts_path);
    write_header(out, header);
    out << "gene_id";
    for (int t = 0; t < data.n_times(); ++t)
      for (int j = 0; j < data.n_samples(t); ++j) out << '\t' << data.samples[t][j].column_name;
    out << '\n';
    for (int k = 0; k < data.n_genes(); ++k) {
      out << data.gene_ids[k];
      for (int t = 0; t < data.n_times(); ++t)
        for (int j = 0; j < data.n_samples(t); ++j) out << '\t' << data.at(k, t, j);
      out << '\n';
    }
    if (!out) throw io_error("write failed: " + counts_path);
  }
  {
    auto out = open_out(meta_path);
    write_header(out, header);
    out << "column_name\ttime_value\tcondition\treplicate\n";
    for (int t = 0; t < data.n_times(); ++t)
      for (int j = 0; j < data.n_samples(t); ++j) {
        const SampleInfo& si = data.samples[t][j];
        out << si.column_name << '\t' << format_double(data.time_labels[t]) << '\t'
            << si.condition << '\t' << si.replicate << '\n';
      }
    if (!out) throw io_error("write failed: " + meta_path);
  }
}

CountTensor read_count_matrix(const std::string& counts_path, const std::string& meta_path) {
  struct MetaRow {
    double time = 0.0;
    int condition = 1;
    int replicate = 1;
  };
  std::vector<std::pair<std::string, MetaRow>> meta_rows;
  {
    auto in = open_in(meta_path);
    std::string line;
    if (!next_line(in, line)) throw io_error("empty metadata file: " + meta_path);
    const auto cols = split_tabs(line);
    if (cols.size() < 4 || cols[0] != "column_name")
      throw io_error("bad metadata header in " + meta_path);
    while (next_line(in, line)) {
      const auto f = split_tabs(line);
      if (f.size() < 4) throw io_error("short metadata row in " + meta_path);
      MetaRow row;
      row.time = parse_double(f[1], meta_path);
      row.condition = static_cast<int>(parse_int(f[2], meta_path));
      row.replicate = static_cast<int>(parse_int(f[3], meta_path));
      meta_rows.emplace_back(f[0], row);
    }
  }
  if (meta_rows.empty()) throw io_error("metadata has no samples: " + meta_path);

  CountTensor data;
  // time grid: unique values ascending; samples keep metadata row order
  for (const auto& [name, row] : meta_rows) {
    (void)name;
    if (std::find(data.time_labels.begin(), data.time_labels.end(), row.time) ==
        data.time_labels.end())
      data.time_labels.push_back(row.time);
  }
  std::sort(data.time_labels.begin(), data.time_labels.end());
  const int T1 = data.n_times();
  data.samples.resize(T1);
  std::map<std::string, std::pair<int, int>> column_slot;  // name -> (t, j)
  for (const auto& [name, row] : meta_rows) {
    const int t = static_cast<int>(
        std::find(data.time_labels.begin(), data.time_labels.end(), row.time) -
        data.time_labels.begin());
    if (column_slot.count(name) != 0)
      throw io_error("duplicate column '" + name + "' in " + meta_path);
    column_slot[name] = {t, static_cast<int>(data.samples[t].size())};
    SampleInfo si;
    si.column_name = name;
    si.condition = row.condition;
    si.replicate = row.replicate;
    data.samples[t].push_back(si);
  }

  auto in = open_in(counts_path);
  std::string line;
  if (!next_line(in, line)) throw io_error("empty count file: " + counts_path);
  const auto head = split_tabs(line);
  if (head.empty() || head[0] != "gene_id")
    throw io_error("count file must start with a gene_id header: " + counts_path);
  std::vector<std::pair<int, int>> col_of(head.size() - 1);
  if (head.size() - 1 != meta_rows.size())
    throw io_error("count columns do not match metadata rows: " + counts_path);
  for (std::size_t i = 1; i < head.size(); ++i) {
    const auto it = column_slot.find(head[i]);
    if (it == column_slot.end())
      throw io_error("count column '" + head[i] + "' missing from metadata");
    col_of[i - 1] = it->second;
  }

  std::vector<std::vector<std::int64_t>> rows;
  while (next_line(in, line)) {
    const auto f = split_tabs(line);
    if (f.size() != head.size())
      throw io_error("row width mismatch for gene '" + (f.empty() ? "" : f[0]) + "' in " +
                     counts_path);
    data.gene_ids.push_back(f[0]);
    auto& row = rows.emplace_back();
    row.reserve(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) row.push_back(parse_int(f[i], counts_path));
  }
  const int K = data.n_genes();
  if (K == 0) throw io_error("count file has no genes: " + counts_path);
  data.counts.resize(T1);
  for (int t = 0; t < T1; ++t)
    data.counts[t].assign(static_cast<std::size_t>(K) * data.samples[t].size(), 0);
  for (int k = 0; k < K; ++k)
    for (std::size_t i = 0; i < col_of.size(); ++i) {
      const auto [t, j] = col_of[i];
      data.at(k, t, j) = rows[k][i];
    }
  data.validate();
  return data;
}

std::string default_meta_path(const std::string& counts_path) {
  const std::string suffix = ".counts.tsv";
  if (counts_path.size() > suffix.size() &&
      counts_path.compare(counts_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return counts_path.substr(0, counts_path.size() - suffix.size()) + ".meta.tsv";
  return counts_path + ".meta.tsv";
}

void write_truth(const std::string& path, const LabeledDataset& ds, const FileHeader& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "gene_id\tis_de\tcond2_params\n";
  for (std::size_t k = 0; k < ds.truth.size(); ++k)
    out << ds.cond1.gene_ids[k] << '\t' << (ds.truth[k] ? 1 : 0) << '\t'
        << ds.records[k].params_cond2 << '\n';
  if (!out) throw io_error("write failed: " + path);
}

std::vector<std::pair<std::string, bool>> read_truth(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!next_line(in, line)) throw io_error("empty truth file: " + path);
  const auto head = split_tabs(line);
  if (head.size() < 2 || head[0] != "gene_id" || head[1] != "is_de")
    throw io_error("bad truth header in " + path);
  std::vector<std::pair<std::string, bool>> out;
  while (next_line(in, line)) {
    const auto f = split_tabs(line);
    if (f.size() < 2) throw io_error("short truth row in " + path);
    out.emplace_back(f[0], parse_int(f[1], path) != 0);
  }
  return out;
}

void write_param_record(const std::string& path, const LabeledDataset& ds,
                        const FileHeader& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "kind\tid\tis_de\tcond1_params\tcond2_params\n";
  for (int t = 0; t < ds.cond1.n_times(); ++t)
    for (int j = 0; j < ds.cond1.n_samples(t); ++j)
      out << "sample\t" << ds.cond1.samples[t][j].column_name << "\t.\tsf="
          << format_double(ds.sf_cond1[t][j]) << "\tsf=" << format_double(ds.sf_cond2[t][j])
          << '\n';
  for (std::size_t k = 0; k < ds.records.size(); ++k)
    out << "gene\t" << ds.cond1.gene_ids[k] << '\t' << (ds.records[k].is_de ? 1 : 0) << '\t'
        << ds.records[k].params_cond1 << '\t' << ds.records[k].params_cond2 << '\n';
  if (!out) throw io_error("write failed: " + path);
}

void write_bf_report(const std::string& path, const BfReport& report, const FileHeader& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "gene_id\trank\tlog_bf\tlog_ml_m0\tlog_ml_m1\tlog_ml_m2\testimator\tall_zero\n";
  for (const GeneBf& g : report.genes)
    out << g.gene_id << '\t' << g.rank << '\t' << format_double(g.log_bf) << '\t'
        << format_double(g.log_ml_m0) << '\t' << format_double(g.log_ml_m1) << '\t'
        << format_double(g.log_ml_m2) << '\t' << estimator_name(report.estimator) << '\t'
        << (g.all_zero ? 1 : 0) << '\n';
  if (!out) throw io_error("write failed: " + path);
}

BfReport read_bf_report(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!next_line(in, line)) throw io_error("empty report file: " + path);
  const auto head = split_tabs(line);
  if (head.size() < 8 || head[0] != "gene_id") throw io_error("bad report header in " + path);
  BfReport report;
  bool estimator_set = false;
  while (next_line(in, line)) {
    const auto f = split_tabs(line);
    if (f.size() < 8) throw io_error("short report row in " + path);
    GeneBf g;
    g.gene_id = f[0];
    g.rank = static_cast<int>(parse_int(f[1], path));
    g.log_bf = parse_double(f[2], path);
    g.log_ml_m0 = parse_double(f[3], path);
    g.log_ml_m1 = parse_double(f[4], path);
    g.log_ml_m2 = parse_double(f[5], path);
    g.all_zero = parse_int(f[7], path) != 0;
    if (!estimator_set) {
      report.estimator = estimator_from_name(f[6]);
      estimator_set = true;
    }
    report.genes.push_back(std::move(g));
  }
  return report;
}

void write_curve(const std::string& path, const CurveResult& curve, const FileHeader& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "# auc: " << format_double(curve.auc) << "\n";
  out << "# n_positives: " << curve.n_positives << "  n_negatives: " << curve.n_negatives
      << "\n";
  out << "x\ty\n";
  for (const auto& [x, y] : curve.points)
    out << format_double(x) << '\t' << format_double(y) << '\n';
  if (!out) throw io_error("write failed: " + path);
}

void write_auc_summary(const std::string& path, const std::vector<AucSummaryRow>& rows,
                       const FileHeader& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "method\tgenerator\tmetric\tmean\tsd\tn_runs\n";
  for (const auto& r : rows)
    out << r.method << '\t' << r.generator << '\t' << r.metric << '\t' << format_double(r.mean)
        << '\t' << format_double(r.sd) << '\t' << r.n_runs << '\n';
  if (!out) throw io_error("write failed: " + path);
}

void write_r_summary(const std::string& path, const CountTensor& data, const RSummary& summary,
                     const FileHeader& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "# interval level: " << format_double(summary.level) << "\n";
  out << "gene_id\ttime_index\ttime_value\tr_mean\tr_lo\tr_hi\n";
  const int T1 = data.n_times();
  for (int k = 0; k < data.n_genes(); ++k)
    for (int t = 0; t < T1; ++t) {
      const std::size_t i = static_cast<std::size_t>(k) * T1 + t;
      out << data.gene_ids[k] << '\t' << t << '\t' << format_double(data.time_labels[t]) << '\t'
          << format_double(summary.mean[i]) << '\t' << format_double(summary.lo[i]) << '\t'
          << format_double(summary.hi[i]) << '\n';
    }
  if (!out) throw io_error("write failed: " + path);
}

void write_loglik_trace(const std::string& path, const PosteriorSamples& samples,
                        const FileHeader& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "draw\tlog_likelihood\n";
  for (std::size_t s = 0; s < samples.loglik_per_draw.size(); ++s)
    out << s << '\t' << format_double(samples.loglik_per_draw[s]) << '\n';
  if (!out) throw io_error("write failed: " + path);
}

void write_chain_state(const std::string& path, const ChainState& state) {
  auto out = open_out(path);
  out << "chain_state\t" << state.K << '\t' << state.T1 << '\n';
  out << "J";
  for (const auto& pt : state.p) out << '\t' << pt.size();
  out << '\n';
  auto dump_doubles = [&](const char* tag, const std::vector<double>& v) {
    out << tag;
    for (const double x : v) out << '\t' << format_double(x);
    out << '\n';
  };
  auto dump_ints = [&](const char* tag, const std::vector<std::int64_t>& v) {
    out << tag;
    for (const auto x : v) out << '\t' << x;
    out << '\n';
  };
  dump_doubles("r", state.r);
  dump_doubles("c", state.c);
  for (const auto& pt : state.p) dump_doubles("p", pt);
  for (const auto& lt : state.l) dump_ints("l", lt);
  dump_ints("l_dot", state.l_dot);
  dump_ints("u", state.u);
  dump_doubles("q", state.q);
  if (!out) throw io_error("write failed: " + path);
}

ChainState read_chain_state(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!next_line(in, line)) throw io_error("empty chain-state file: " + path);
  auto f = split_tabs(line);
  if (f.size() != 3 || f[0] != "chain_state") throw io_error("bad chain-state file: " + path);
  ChainState s;
  s.K = static_cast<int>(parse_int(f[1], path));
  s.T1 = static_cast<int>(parse_int(f[2], path));
  if (!next_line(in, line)) throw io_error("truncated chain-state file: " + path);
  f = split_tabs(line);
  if (f.empty() || f[0] != "J" || static_cast<int>(f.size()) != s.T1 + 1)
    throw io_error("bad J row in chain-state file: " + path);
  std::vector<int> J(s.T1);
  for (int t = 0; t < s.T1; ++t) J[t] = static_cast<int>(parse_int(f[t + 1], path));

  auto read_doubles = [&](const char* tag, std::vector<double>& v) {
    if (!next_line(in, line)) throw io_error("truncated chain-state file: " + path);
    const auto g = split_tabs(line);
    if (g.empty() || g[0] != tag) throw io_error(std::string("expected ") + tag + " in " + path);
    v.resize(g.size() - 1);
    for (std::size_t i = 1; i < g.size(); ++i) v[i - 1] = parse_double(g[i], path);
  };
  auto read_ints = [&](const char* tag, std::vector<std::int64_t>& v) {
    if (!next_line(in, line)) throw io_error("truncated chain-state file: " + path);
    const auto g = split_tabs(line);
    if (g.empty() || g[0] != tag) throw io_error(std::string("expected ") + tag + " in " + path);
    v.resize(g.size() - 1);
    for (std::size_t i = 1; i < g.size(); ++i) v[i - 1] = parse_int(g[i], path);
  };

  read_doubles("r", s.r);
  read_doubles("c", s.c);
  s.p.resize(s.T1);
  for (int t = 0; t < s.T1; ++t) read_doubles("p", s.p[t]);
  s.l.resize(s.T1);
  for (int t = 0; t < s.T1; ++t) read_ints("l", s.l[t]);
  read_ints("l_dot", s.l_dot);
  read_ints("u", s.u);
  read_doubles("q", s.q);
  for (int t = 0; t < s.T1; ++t)
    if (static_cast<int>(s.p[t].size()) != J[t])
      throw io_error("chain-state p width mismatch in " + path);
  return s;
}

}  // namespace gmnb
