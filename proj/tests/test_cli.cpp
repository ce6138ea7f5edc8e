#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "tsad/cli.hpp"

using namespace tsad;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

struct Cli : ::testing::Test {
  fs::path dir;

  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("tsad_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = (dir / name).string();
    std::ofstream(p) << text;
    return p;
  }
  static std::string read(const fs::path& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), {}};
  }
};

const std::string samples = TSAD_SAMPLES_DIR;

}  // namespace

TEST_F(Cli, EvaluateS1Samples) {
  const auto r = run({"evaluate", "--labels", samples + "/s1_labels.csv", "--prediction",
                      samples + "/s1_prediction.json", "--metrics", "pw_f,pa_f", "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "metric,score,direction,parameters\n"
            "pw_f,0.166667,higher-better,beta=1\n"
            "pa_f,0.952381,higher-better,beta=1\n");
}

TEST_F(Cli, TableAndJsonFormats) {
  const auto t = run({"evaluate", "--labels", samples + "/s1_labels.csv", "--prediction",
                      samples + "/s1_prediction.json", "--metrics", "pw_f,pa_f"});
  EXPECT_NE(t.out.find("pw_f"), std::string::npos);
  EXPECT_NE(t.out.find("0.952381"), std::string::npos);
  const auto j = run({"evaluate", "--labels", samples + "/s1_labels.csv", "--prediction",
                      samples + "/s1_prediction.json", "--metrics", "pa_f", "--format", "json"});
  const auto parsed = nlohmann::json::parse(j.out);
  EXPECT_DOUBLE_EQ(parsed[0]["score"].get<double>(), 0.952381);
  EXPECT_EQ(parsed[0]["direction"], "higher-better");
}

TEST_F(Cli, PerMetricParametersOverrideConfigFile) {
  const auto labels = write("l.csv", "0\n0\n1\n1\n1\n1\n1\n0\n0\n0\n");
  const auto pred = write("p.csv", "0\n0\n0\n0\n0\n0\n1\n0\n0\n0\n");
  const auto conf = write("c.conf", "# comment\nk = 1\n");
  auto r = run({"evaluate", "--labels", labels, "--prediction", pred, "--config", conf, "--metrics", "dtpa_f",
                "--format", "csv"});
  EXPECT_NE(r.out.find("dtpa_f,0.000000,higher-better,beta=1;k=1"), std::string::npos) << r.out << r.err;
  r = run({"evaluate", "--labels", labels, "--prediction", pred, "--config", conf, "--metrics", "dtpa_f(k=5)",
           "--format", "csv"});
  EXPECT_NE(r.out.find("dtpa_f,1.000000,higher-better,beta=1;k=5"), std::string::npos) << r.out << r.err;
}

TEST_F(Cli, AllApplicableMetricsByDefault) {
  const auto r = run({"evaluate", "--labels", samples + "/s1_labels.csv", "--prediction",
                      samples + "/s1_prediction.json", "--score", samples + "/s1_score.csv", "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 21);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({"evaluate", "--labels", samples + "/s1_labels.csv", "--metrics", "pw_f"}).code, 2);
  const auto single = write("single.csv", "0\n0\n0\n");
  const auto score = write("score.json", "[0.1, 0.5, 0.2]");
  const auto r = run({"evaluate", "--labels", single, "--score", score, "--metrics", "auc_roc"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("auc_roc"), std::string::npos);
  const auto point = write("point.csv", "0\n1\n0\n0\n");
  const auto pp = write("pp.csv", "0\n1\n0\n0\n");
  const auto nab = run({"evaluate", "--labels", point, "--prediction", pp, "--metrics", "nab"});
  EXPECT_EQ(nab.code, 3);
  EXPECT_NE(nab.err.find("nab"), std::string::npos);
  EXPECT_EQ(run({"evaluate", "--labels", write("bad.csv", "0\n2\n"), "--prediction", pp}).code, 2);
  EXPECT_EQ(run({"evaluate", "--labels", point, "--prediction", write("short.csv", "0\n1\n")}).code, 2);
  EXPECT_EQ(run({"evaluate", "--labels", point, "--prediction", pp, "--metrics", "bogus"}).code, 2);
  EXPECT_EQ(run({"evaluate", "--labels", (dir / "missing.csv").string(), "--prediction", pp}).code, 2);
  EXPECT_EQ(run({"evaluate", "--labels", point, "--prediction", pp, "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"evaluate", "--labels", write("empty.csv", "label\n"), "--prediction", pp}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST_F(Cli, InputFormats) {
  EXPECT_EQ(io::parse_series("value\n1\n2.5\n\n-3\n", "x"), (std::vector<double>{1, 2.5, -3}));
  EXPECT_EQ(io::parse_series(" [1, 0, 1] ", "x"), (std::vector<double>{1, 0, 1}));
  EXPECT_THROW(io::parse_series("1\nfoo\n", "x"), invalid_input);
  EXPECT_THROW(io::parse_series("[1, \"a\"]", "x"), invalid_input);
  EXPECT_THROW(io::parse_series("[]", "x"), invalid_input);
  EXPECT_THROW(io::to_binary({0.0, 0.5}, "x"), invalid_input);
  const auto specs = io::parse_metric_list("pw_f, pak_f(K_pct=10, beta=2), aucroc");
  ASSERT_EQ(specs.size(), 3u);
  EXPECT_EQ(specs[1].id, MetricId::pak_f);
  EXPECT_EQ(specs[1].params.size(), 2u);
  EXPECT_EQ(specs[2].id, MetricId::auc_roc);
  EXPECT_THROW(io::parse_metric_list("pak_f(K_pct=10"), invalid_input);
}

TEST_F(Cli, SweepCurves) {
  const auto labels = write("l.csv", "0\n1\n1\n0\n");
  auto r = run({"sweep", "--labels", labels, "--score", write("s.csv", "0\n1\n1\n0\n"), "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("roc,0.000000,0.000000,1.000000"), std::string::npos) << r.out;
  r = run({"sweep", "--labels", labels, "--score", write("c.csv", "2\n2\n2\n2\n"), "--format", "csv"});
  const auto roc_rows = [&] {
    std::size_t n = 0;
    for (std::size_t pos = 0; (pos = r.out.find("\nroc,", pos)) != std::string::npos; ++pos) ++n;
    return n;
  }();
  EXPECT_EQ(roc_rows, 2u);
  const auto plot = (dir / "curves.svg").string();
  r = run({"sweep", "--labels", labels, "--score", write("t.csv", "0.3\n0.9\n0.1\n0.2\n"), "--plot", plot});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(read(plot).find("<svg"), std::string::npos);
  EXPECT_EQ(run({"sweep", "--labels", write("one.csv", "1\n1\n"), "--score", write("u.csv", "1\n2\n")}).code, 3);
}

TEST_F(Cli, SweepAreaMatchesAuc) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::uint8_t> l(50);
    std::vector<double> s(50);
    for (std::size_t i = 0; i < 50; ++i) l[i] = i % 5 == 0, s[i] = static_cast<double>(rng() % 10);
    const BinarySeries lab(l);
    const ScoreSeries sc(s);
    EXPECT_NEAR(tsad::detail::trapezoid(roc_curve(lab, sc)), auc_roc(lab, sc), 1e-12);
    EXPECT_NEAR(tsad::detail::average_precision(pr_curve(lab, sc)), auc_pr(lab, sc), 1e-12);
  }
}

TEST_F(Cli, MatrixOutput) {
  const auto out = dir / "nested" / "matrix";
  const auto r = run({"matrix", "--out", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto csv = read(out / "matrix.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
  const auto header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 11);
  EXPECT_EQ(csv.find("FAIL"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "matrix_cells.csv"));
}

TEST_F(Cli, CaseStudiesDeterministic) {
  const auto a = dir / "a", b = dir / "b";
  ASSERT_EQ(run({"casestudies", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"casestudies", "--out", b.string()}).code, 0);
  for (const char* f : {"scenarios.csv", "positional.csv", "positional.svg", "positional_checks.csv",
                        "auc_disagreement.csv", "auc_disagreement_summary.csv", "auc_disagreement.svg"}) {
    EXPECT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(read(a / f), read(b / f)) << f;
  }
  const auto scen = read(a / "scenarios.csv");
  EXPECT_NE(scen.find("PASS"), std::string::npos);
  EXPECT_EQ(scen.find(",FAIL"), std::string::npos);
}

TEST_F(Cli, UnwritableOutput) {
  const auto file = write("plain", "x");
  EXPECT_EQ(run({"matrix", "--out", file + "/sub"}).code, 2);
}
