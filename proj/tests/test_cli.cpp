#include "cli.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <unistd.h>

using namespace rlg;
namespace fs = std::filesystem;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an rlg::Error";
  return ErrorCode::InvalidArgument;
}

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "rlg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("rlg_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

SweepConfig tiny_sweep() {
  SweepConfig c;
  c.d = 3;
  c.n_values = {10, 20};
  c.k_values = {3, 4, 5};
  c.replicates = 4;
  c.seed = 3;
  c.methods = {Method::dfs, Method::exact_trace, Method::spectral};
  return c;
}

}  // namespace

TEST(Io, GraphJsonRoundTrip) {
  for (const auto& g : fixtures::random_graphs(71, 10, {2, 3, 4}, 1, 20)) {
    EXPECT_EQ(graph_from_json(graph_to_json(g)), g);
    EXPECT_EQ(graph_from_json(parse_json_text(graph_to_json(g).dump())), g);
  }
  const Json j = graph_to_json(fixtures::b2());
  EXPECT_EQ(j.dump(), R"({"d":3,"n":2,"pairing":[3,4,5,0,1,2]})");
}

TEST(Io, GraphJsonErrors) {
  EXPECT_EQ(code_of([] { parse_json_text("{not json"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { graph_from_json(parse_json_text(R"({"d":3,"n":2})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { graph_from_json(parse_json_text(R"({"d":"3","n":2,"pairing":[]})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { graph_from_json(parse_json_text(R"({"d":1,"n":2,"pairing":[1,-1]})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { graph_from_json(parse_json_text(R"({"d":1,"n":2,"pairing":[1,5000000000]})")); }),
            ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of([] { graph_from_json(parse_json_text(R"({"d":2,"n":2,"pairing":[1,2,3,0]})")); }),
            ErrorCode::NotInvolution);
  EXPECT_EQ(code_of([] { read_file("/nonexistent/graph.json"); }), ErrorCode::InvalidArgument);
}

TEST(Io, CensusJsonRoundTrip) {
  const LoopCensus c = census(fixtures::k4(), 3);
  const LoopCensus back = census_from_json(census_to_json(c));
  EXPECT_EQ(back.k, c.k);
  EXPECT_EQ(back.n_simp, c.n_simp);
  EXPECT_EQ(back.n_prim, c.n_prim);
  EXPECT_EQ(back.n_tr, c.n_tr);
  EXPECT_EQ(back.n_all, c.n_all);
  EXPECT_EQ(census_to_json(c).dump(), R"({"k":3,"n_simp":"8","n_prim":"8","n_tr":"24","n_all":"8"})");
  EXPECT_EQ(code_of([] { census_from_json(parse_json_text(R"({"k":3})")); }), ErrorCode::ParseError);
}

TEST(Io, SweepCsvHeaderAndRows) {
  const SweepResult res = run_sweep(tiny_sweep());
  const std::string csv = sweep_to_csv(res);
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header,
            "d,n,k,model,method,replicates,mean_nsimp,se_nsimp,mean_ntr,se_ntr,mean_nprim,second_moment_nsimp,"
            "ratio_R,ratio_CI_low,ratio_CI_high,conc_fraction,share_lambda,share_mu,skipped");
  const CsvTable t = parse_csv(csv);
  EXPECT_EQ(t.header, sweep_csv_columns());
  ASSERT_EQ(t.rows.size(), 2u * 3u * 3u);
  const auto mc = t.column("method"), ntr = t.column("mean_ntr"), ns = t.column("mean_nsimp");
  for (const auto& row : t.rows) {
    ASSERT_EQ(row.size(), 19u);
    EXPECT_EQ(row[t.column("skipped")], "0");
    EXPECT_EQ(row[t.column("model")], "configuration");
    if (row[mc] == "dfs") {
      EXPECT_TRUE(row[ntr].empty());
      EXPECT_FALSE(row[ns].empty());
    } else {
      EXPECT_FALSE(row[ntr].empty());
      EXPECT_TRUE(row[ns].empty());
    }
  }
  // Numeric fields parse back to the summary values exactly.
  const auto rows = summarize(res);
  EXPECT_EQ(std::stod(t.rows[1][ntr]), *rows[1].mean_ntr);
  EXPECT_EQ(code_of([&] { t.column("nope"); }), ErrorCode::MissingColumn);
}

TEST(Io, SweepJsonSchema) {
  const SweepResult res = run_sweep(tiny_sweep());
  const Json j = sweep_to_json(res);
  ASSERT_TRUE(j.contains("config"));
  ASSERT_TRUE(j.contains("cells"));
  EXPECT_EQ(j["config"]["d"], 3);
  EXPECT_EQ(j["config"]["seed"], "3");
  EXPECT_EQ(j["config"]["methods"], Json::array({"dfs", "exact-trace", "spectral"}));
  ASSERT_EQ(j["cells"].size(), 6u);
  const Json& cell = j["cells"][0];
  for (const char* key : {"n", "k", "replicates", "streams", "values", "skipped"}) EXPECT_TRUE(cell.contains(key)) << key;
  EXPECT_EQ(cell["streams"][1], "1");
  EXPECT_EQ(cell["values"]["dfs"]["n_simp"].size(), 4u);
  EXPECT_TRUE(cell["values"]["dfs"]["n_simp"][0].is_string());
  EXPECT_EQ(cell["values"]["dfs"]["n_simp"][0], to_decimal(res.cells[0].nsimp_dfs[0]));
  EXPECT_TRUE(cell["values"]["exact-trace"].contains("n_prim"));
  EXPECT_TRUE(cell["values"]["spectral"].contains("mu"));
  EXPECT_EQ(j["cells"][3]["streams"][0], std::to_string(1ULL << 32));
}

TEST(Plot, EmptyAndMissingColumns) {
  PlotOptions opt;
  EXPECT_EQ(code_of([&] { plot_csv_text("", opt); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([&] { plot_csv_text("k,ratio_R,n\n", opt); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([&] { plot_csv_text("k,other,n\n1,2,3\n", opt); }), ErrorCode::MissingColumn);
  opt.method = "dfs";
  EXPECT_EQ(code_of([&] { plot_csv_text("k,ratio_R,n\n1,2,3\n", opt); }), ErrorCode::MissingColumn);
}

TEST(Plot, SeriesGrouping) {
  const std::string csv =
      "k,ratio_R,n,method\n"
      "3,1.0,200,exact-trace\n"
      "1,0.5,200,exact-trace\n"
      "1,0.9,200,exact-trace\n"
      "2,,200,exact-trace\n"
      "2,0.7,30,exact-trace\n"
      "2,5,30,dfs\n";
  PlotOptions opt;
  opt.method = "exact-trace";
  const auto series = collect_series(parse_csv(csv), opt);
  ASSERT_EQ(series.size(), 2u);
  EXPECT_EQ(series[0].label, "30");  // numeric order, not lexical
  EXPECT_EQ(series[0].points, (std::vector<std::pair<double, double>>{{2, 0.7}}));
  EXPECT_EQ(series[1].points, (std::vector<std::pair<double, double>>{{1, 0.5}, {3, 1.0}}));
  const std::string svg = plot_csv_text(csv, opt);
  EXPECT_EQ(svg, plot_csv_text(csv, opt));
  EXPECT_NE(svg.find("data-series=\"200\""), std::string::npos);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
}

TEST(Plot, SweepSeriesIsDeterministicAndDecreasing) {
  SweepConfig c;
  c.d = 3;
  c.n_values = {400};
  c.k_values = {5, 20, 40, 80};
  c.replicates = 30;
  c.seed = 8;
  c.methods = {Method::walk_sample, Method::spectral};
  c.walks_per_graph = 1000;
  const std::string csv = sweep_to_csv(run_sweep(c));
  PlotOptions opt;
  opt.method = "spectral";
  const auto series = collect_series(parse_csv(csv), opt);
  ASSERT_EQ(series.size(), 1u);
  ASSERT_EQ(series[0].points.size(), 4u);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LT(series[0].points[i].second, series[0].points[i - 1].second);
  EXPECT_EQ(plot_csv_text(csv, opt), plot_csv_text(sweep_to_csv(run_sweep(c, 3)), opt));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, cli::exit_usage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::exit_usage);
  EXPECT_EQ(run({"expect", "--d", "3", "--n", "2"}).code, cli::exit_usage);
  EXPECT_EQ(run({"sample", "--d", "3", "--n", "4", "--model", "erdos"}).code, cli::exit_usage);
  const CliRun odd = run({"sample", "--d", "3", "--n", "3"});
  EXPECT_EQ(odd.code, cli::exit_domain);
  EXPECT_NE(odd.err.find("OddHalfEdges"), std::string::npos);
  EXPECT_EQ(run({"census", "--graph", "/nonexistent.json", "--k", "3"}).code, cli::exit_domain);
  EXPECT_EQ(run({"sweep", "--d", "3", "--n", "21", "--k", "3"}).code, cli::exit_usage);
  EXPECT_EQ(run({"sweep", "--d", "3", "--n", "20", "--k", "3", "--methods", "dfs,magic"}).code, cli::exit_usage);
  EXPECT_EQ(run({"sample", "--d", "3", "--n", "2", "--model", "uniform-simple", "--budget-rejection", "10"}).code,
            cli::exit_domain);
  EXPECT_EQ(run({"--help"}).code, cli::exit_ok);
}

TEST(Cli, Expect) {
  const CliRun r = run({"expect", "--d", "3", "--n", "2", "--k", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "12/5\n2.40000000000\n");
  EXPECT_EQ(run({"expect", "--d", "3", "--n", "4", "--k", "9"}).out, "0/1\n0.00000000000\n");
}

TEST(Cli, SampleThenCensusMatchesInProcess) {
  TempDir dir;
  const std::string path = dir.file("g.json");
  ASSERT_EQ(run({"sample", "--d", "3", "--n", "30", "--seed", "12", "--out", path}).code, 0);
  RngStream rng(12, 0);
  const Multigraph expected = sample_configuration(3, 30, rng);
  EXPECT_EQ(load_graph(path), expected);
  const CliRun r = run({"census", "--graph", path, "--k", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json got = parse_json_text(r.out);
  const Json want = census_to_json(census(expected, 6));
  EXPECT_EQ(got, want);

  const CliRun grid = run({"census", "--graph", path, "--k-grid", "3,5", "--methods", "exact-trace,spectral"});
  ASSERT_EQ(grid.code, 0) << grid.err;
  const Json g = parse_json_text(grid.out);
  ASSERT_TRUE(g.is_array());
  ASSERT_EQ(g.size(), 2u);
  EXPECT_FALSE(g[0].contains("n_simp"));
  EXPECT_EQ(g[1]["n_tr"], to_decimal(closed_nb_walk_traces(expected, 5)[5]));
  EXPECT_NEAR(g[1]["n_tr_spectral"].get<double>(), to_double(closed_nb_walk_traces(expected, 5)[5]), 1e-6);
}

TEST(Cli, CensusLoopsAndSpectrum) {
  TempDir dir;
  const std::string path = dir.file("k4.json");
  save_graph(path, fixtures::k4());
  const CliRun loops = run({"census", "--graph", path, "--k", "3", "--loops"});
  ASSERT_EQ(loops.code, 0) << loops.err;
  const Json j = parse_json_text(loops.out);
  EXPECT_EQ(j["n_simp"], "8");
  EXPECT_EQ(j["loops"].size(), 8u);
  EXPECT_EQ(j["loops"][0], Json::array({0, 4, 6}));
  const CliRun spec = run({"spectrum", "--graph", path, "--path", "direct"});
  ASSERT_EQ(spec.code, 0) << spec.err;
  const Json s = parse_json_text(spec.out);
  EXPECT_NEAR(s["lambda"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(s["mu"].get<double>(), std::sqrt(2.0), 1e-6);
  EXPECT_EQ(s["nb"].size(), 12u);
  EXPECT_EQ(run({"spectrum", "--graph", path, "--path", "sideways"}).code, cli::exit_usage);
}

TEST(Cli, SweepAndPlotFiles) {
  TempDir dir;
  const std::string csv = dir.file("s.csv"), json = dir.file("s.json"), svg = dir.file("s.svg");
  const CliRun r = run({"sweep", "--d", "3", "--n", "10,20", "--k-grid", "3,4,5", "--replicates", "4", "--seed", "3",
                     "--methods", "dfs,exact-trace,spectral", "--out", csv, "--json", json});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(csv), sweep_to_csv(run_sweep(tiny_sweep())));
  EXPECT_EQ(parse_json_text(read_file(json)), sweep_to_json(run_sweep(tiny_sweep())));
  ASSERT_EQ(run({"plot", "--csv", csv, "--method", "exact-trace", "--out", svg}).code, 0);
  EXPECT_NE(read_file(svg).find("<polyline"), std::string::npos);
  EXPECT_EQ(run({"plot", "--csv", csv, "--y", "missing", "--out", svg}).code, cli::exit_domain);
  EXPECT_EQ(run({"plot", "--csv", csv}).code, cli::exit_usage);
}

TEST(Cli, ThreadsFromEnvironment) {
  ::setenv("RLG_THREADS", "3", 1);
  EXPECT_EQ(cli::threads_from_env(), 3u);
  ::setenv("RLG_THREADS", "abc", 1);
  EXPECT_EQ(cli::threads_from_env(), 1u);
  ::unsetenv("RLG_THREADS");
  EXPECT_EQ(cli::threads_from_env(), 1u);
  EXPECT_EQ(cli::split_list("a,,b,"), (std::vector<std::string>{"a", "b"}));
}
