#include "gmnb/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "gmnb/errors.hpp"
#include "gmnb/rng.hpp"
#include "test_helpers.hpp"

using namespace gmnb;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("gmnb_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("count matrix round trip is exact") {
  TempDir tmp;
  auto data = test_helpers::make_tensor(3, {0.0, 12.5, 24.0}, 2);
  RngStream rng(1, 0);
  for (int k = 0; k < 3; ++k)
    for (int t = 0; t < 3; ++t)
      for (int j = 0; j < 2; ++j)
        data.at(k, t, j) = static_cast<std::int64_t>(rng.uniform() * 100000);
  data.samples[1][1].condition = 2;
  data.samples[1][1].replicate = 7;

  FileHeader header{"genes=3", 42};
  write_count_matrix(tmp.file("a.counts.tsv"), tmp.file("a.meta.tsv"), data, header);
  const CountTensor back = read_count_matrix(tmp.file("a.counts.tsv"), tmp.file("a.meta.tsv"));

  CHECK(back.gene_ids == data.gene_ids);
  CHECK(back.time_labels == data.time_labels);
  CHECK(back.counts == data.counts);
  CHECK(back.samples[1][1].condition == 2);
  CHECK(back.samples[1][1].replicate == 7);
  CHECK(back.samples[0][0].column_name == data.samples[0][0].column_name);

  // header comments carry version and seed
  const std::string text = slurp(tmp.file("a.counts.tsv"));
  CHECK(text.find("# gmnb ") == 0);
  CHECK(text.find("# seed: 42") != std::string::npos);
  CHECK(text.find("# config: genes=3") != std::string::npos);
}

TEST_CASE("count matrix rewrite is byte identical") {
  TempDir tmp;
  auto data = test_helpers::make_tensor(2, {0.0, 1.0}, 2, 5);
  FileHeader header{"x=1", 7};
  write_count_matrix(tmp.file("a.counts.tsv"), tmp.file("a.meta.tsv"), data, header);
  write_count_matrix(tmp.file("b.counts.tsv"), tmp.file("b.meta.tsv"), data, header);
  CHECK(slurp(tmp.file("a.counts.tsv")) == slurp(tmp.file("b.counts.tsv")));
  CHECK(slurp(tmp.file("a.meta.tsv")) == slurp(tmp.file("b.meta.tsv")));
}

TEST_CASE("chain state round trip is bit exact") {
  TempDir tmp;
  auto data = test_helpers::make_tensor(2, {0.0, 1.0, 2.0}, 2);
  ChainState s = init_chain_state(data);
  RngStream rng(3, 0);
  for (auto& v : s.r) v = rng.uniform(1e-12, 1e6);
  s.r[0] = 0.1 + 1e-17;  // denormal-adjacent digits must survive
  for (auto& v : s.c) v = rng.uniform(0.5, 2.0);
  for (auto& pt : s.p)
    for (auto& v : pt) v = rng.uniform(1e-9, 1.0 - 1e-9);
  for (auto& lt : s.l)
    for (auto& v : lt) v = static_cast<std::int64_t>(rng.uniform() * 1000);
  for (auto& v : s.u) v = static_cast<std::int64_t>(rng.uniform() * 1000);
  for (auto& v : s.q)
    v = rng.uniform(0.0, 0.99);

  write_chain_state(tmp.file("state.tsv"), s);
  const ChainState back = read_chain_state(tmp.file("state.tsv"));
  CHECK(back.K == s.K);
  CHECK(back.T1 == s.T1);
  CHECK(back.r == s.r);
  CHECK(back.c == s.c);
  CHECK(back.p == s.p);
  CHECK(back.l == s.l);
  CHECK(back.l_dot == s.l_dot);
  CHECK(back.u == s.u);
  CHECK(back.q == s.q);
}

TEST_CASE("bf report round trip") {
  TempDir tmp;
  BfReport report;
  report.estimator = MlEstimator::harmonic_mean;
  report.genes = {{"gA", 1, 700.125, -10.5, -4.25, -3.125, false},
                  {"gB", 2, -3.0000000001, -20.0, -11.0, -12.0, true}};
  write_bf_report(tmp.file("bf.tsv"), report, FileHeader{"", 1});
  const BfReport back = read_bf_report(tmp.file("bf.tsv"));
  REQUIRE(back.genes.size() == 2);
  CHECK(back.estimator == MlEstimator::harmonic_mean);
  CHECK(back.genes[0].gene_id == "gA");
  CHECK(back.genes[0].log_bf == 700.125);
  CHECK(back.genes[1].log_bf == -3.0000000001);
  CHECK(back.genes[1].all_zero);
}

TEST_CASE("truth sidecar round trip") {
  TempDir tmp;
  LabeledDataset ds;
  ds.cond1 = test_helpers::make_tensor(3, {0.0}, 1);
  ds.truth = {true, false, true};
  ds.records.resize(3);
  ds.records[0].params_cond2 = "c=1.5";
  ds.records[2].params_cond2 = "c=0.9";
  ds.sf_cond1 = {{1.0}};
  ds.sf_cond2 = {{1.1}};
  write_truth(tmp.file("truth.tsv"), ds, FileHeader{"", 0});
  const auto back = read_truth(tmp.file("truth.tsv"));
  REQUIRE(back.size() == 3);
  CHECK(back[0] == std::pair<std::string, bool>{"g1", true});
  CHECK(back[1] == std::pair<std::string, bool>{"g2", false});
  CHECK(back[2].second);
}

TEST_CASE("io error paths") {
  TempDir tmp;
  CHECK_THROWS_AS(read_count_matrix(tmp.file("missing.tsv"), tmp.file("missing2.tsv")),
                  io_error);
  {
    std::ofstream bad(tmp.file("bad.counts.tsv"));
    bad << "not_gene_id\tx\n1\t2\n";
    std::ofstream meta(tmp.file("bad.meta.tsv"));
    meta << "column_name\ttime_value\tcondition\treplicate\nx\t0\t1\t1\n";
  }
  CHECK_THROWS_AS(read_count_matrix(tmp.file("bad.counts.tsv"), tmp.file("bad.meta.tsv")),
                  io_error);
  {
    std::ofstream counts(tmp.file("neg.counts.tsv"));
    counts << "gene_id\tx\ng1\t-3\n";
    std::ofstream meta(tmp.file("neg.meta.tsv"));
    meta << "column_name\ttime_value\tcondition\treplicate\nx\t0\t1\t1\n";
  }
  // negative counts are a validation failure surfaced at load time
  CHECK_THROWS_AS(read_count_matrix(tmp.file("neg.counts.tsv"), tmp.file("neg.meta.tsv")),
                  validation_error);
}

TEST_CASE("default meta path derivation") {
  CHECK(default_meta_path("x/run_cond1.counts.tsv") == "x/run_cond1.meta.tsv");
  CHECK(default_meta_path("plain.tsv") == "plain.tsv.meta.tsv");
}
