#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mlkit/cli.hpp"
#include "mlkit/eval.hpp"
#include "testgen.hpp"

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = mlkit::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

// Splits on the delimiter keeping empty fields, unlike a tokenizing split.
std::vector<std::string> fields_of(const std::string& line, char delim = '\t') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string two_point_csv() {
  return testgen::write_file("cli_two_point.csv", "x1,x2,class\n-1,0,-1\n1,0,+1\n");
}

std::string deep_cluster_train_csv() {
  std::string text = "x,class\n";
  for (int i = 0; i < 10; ++i) text += mlkit::fmt_double(-1.0 - 0.2 * i) + ",+1\n";
  for (int i = 0; i < 10; ++i) text += mlkit::fmt_double(1.0 + 0.2 * i) + ",-1\n";
  return testgen::write_file("cli_clusters.csv", text);
}

std::string perfect_attr_csv() {
  return testgen::write_file("cli_perfect.csv",
                             "a0,a1,class\n"
                             "1,1,pos\n1,1,pos\n1,0,pos\n1,0,pos\n"
                             "0,1,neg\n0,1,neg\n0,0,neg\n0,0,neg\n");
}

std::string nb_six_csv() {
  return testgen::write_file("cli_nb.csv",
                             "a0,a1,class\n"
                             "0,0,neg\n0,1,neg\n0,0,neg\n"
                             "1,1,pos\n1,0,pos\n0,1,pos\n");
}

std::string chain_net() {
  return testgen::write_file("cli_chain.net",
                             "node A states a0,a1\n"
                             "node B states b0,b1\n"
                             "parent B A\n"
                             "cpt A\n"
                             "given - : 0.7,0.3\n"
                             "cpt B\n"
                             "given a0 : 0.8,0.2\n"
                             "given a1 : 0.1,0.9\n");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version flag prints the toolkit version") {
  CliResult r = run_cli({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out == std::string(mlkit::cli::kVersion) + "\n");
}

TEST_CASE("help exits cleanly") {
  CliResult r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("mlkit") != std::string::npos);
}

TEST_CASE("usage errors return 1") {
  CHECK(run_cli({"frobnicate"}).code == 1);
  CliResult r = run_cli({"svm", "train"});
  CHECK(r.code == 1);
  CHECK(!r.err.empty());
}

TEST_CASE("a missing input file returns 2 with a diagnostic") {
  CliResult r = run_cli({"bbn", "validate", "--net", testgen::tmp_path("absent.net")});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(r.err.find("cannot open file") != std::string::npos);
}

TEST_CASE("svm train reports the two-point model") {
  std::string data = two_point_csv();
  std::string model = testgen::tmp_path("cli_two_point.model");
  CliResult r = run_cli({"svm", "train", "--data", data, "--label", "class", "--out", model});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] == "examples: 2");
  CHECK(lines[1] == "kernel: linear");
  CHECK(lines[2] == "box_c: 1000");
  CHECK(lines[3].rfind("iterations: ", 0) == 0);
  CHECK(lines[4] == "sv_count: 2");
  CHECK(lines[5] == "loo_bound: 1.000000");
  CHECK(lines[6] == "bias: 0.000000");
  CHECK(lines[7] == "model: " + model);
  CliResult again = run_cli({"svm", "train", "--data", data, "--label", "class", "--out", model});
  CHECK(again.out == r.out);
}

TEST_CASE("svm train scores a holdout slice") {
  std::string text = "x,class\n";
  for (int i = 1; i <= 4; ++i) text += std::to_string(-i) + ",-1\n";
  for (int i = 1; i <= 4; ++i) text += std::to_string(i) + ",+1\n";
  std::string data = testgen::write_file("cli_holdout.csv", text);
  std::string model = testgen::tmp_path("cli_holdout.model");
  CliResult r = run_cli({"svm", "train", "--data", data, "--label", "class", "--out", model,
                         "--holdout", "0.25", "--seed", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("examples: 6\n") != std::string::npos);
  CHECK(r.out.find("holdout: 2\n") != std::string::npos);
  CHECK(r.out.find("holdout accuracy: 100.0%\n") != std::string::npos);
}

TEST_CASE("svm predict emits signed labels and decision values") {
  std::string data = two_point_csv();
  std::string model = testgen::tmp_path("cli_predict.model");
  REQUIRE(run_cli({"svm", "train", "--data", data, "--label", "class", "--out", model}).code == 0);
  std::string queries = testgen::write_file("cli_queries.csv", "x1,x2\n2,0\n-3,0\n");
  CliResult r = run_cli({"svm", "predict", "--model", model, "--data", queries});
  REQUIRE(r.code == 0);
  CHECK(r.out == "0\t+1\t2.000000\n1\t-1\t-3.000000\n");
}

TEST_CASE("transduce labels the deep-cluster query with its confidence") {
  std::string train = deep_cluster_train_csv();
  std::string test = testgen::write_file("cli_cluster_query.csv", "x\n1.5\n");
  CliResult r = run_cli({"transduce", "--train", train, "--test", test, "--label", "class"});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out == "0\tWHITE\t0.809524\t4\t2\t0\n");
  CliResult again = run_cli({"transduce", "--train", train, "--test", test, "--label", "class"});
  CHECK(again.out == r.out);
}

TEST_CASE("an unclassifiable query leaves the confidence field empty") {
  std::string train = testgen::write_file("cli_symmetric.csv",
                                          "x,class\n1,+1\n2,+1\n3,+1\n-1,-1\n-2,-1\n-3,-1\n");
  std::string test = testgen::write_file("cli_center.csv", "x\n0\n");
  CliResult r = run_cli({"transduce", "--train", train, "--test", test, "--label", "class"});
  REQUIRE(r.code == 0);
  std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 1);
  std::vector<std::string> f = fields_of(lines[0]);
  REQUIRE(f.size() == 6);
  CHECK(f[1] == "NONE");
  CHECK(f[2].empty());
  CHECK(f[3] == f[4]);
  CHECK(f[5] == "0");
}

TEST_CASE("gt learn summarizes the induced rulesets") {
  std::string data = perfect_attr_csv();
  std::string rules = testgen::tmp_path("cli_perfect.rules");
  CliResult r = run_cli({"gt", "learn", "--data", data, "--label", "class", "--out", rules});
  REQUIRE(r.code == 0);
  CHECK(r.out == "examples: 8\nattributes: 2\nclasses: 2\nleaves: 4\nrules: " + rules + "\n");
}

TEST_CASE("gt predict reports class, estimate, interval, and support") {
  std::string data = perfect_attr_csv();
  std::string rules = testgen::tmp_path("cli_predict.rules");
  REQUIRE(run_cli({"gt", "learn", "--data", data, "--label", "class", "--out", rules}).code == 0);
  std::string queries = testgen::write_file("cli_gt_queries.csv", "a0,a1\n1,0\n0,1\n");
  CliResult r = run_cli({"gt", "predict", "--rules", rules, "--data", queries});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "0\tpos\t1.000000\t0.510109\t1.000000\t4\n"
        "1\tneg\t1.000000\t0.510109\t1.000000\t4\n");
}

TEST_CASE("nb train and predict round trip through the CLI") {
  std::string data = nb_six_csv();
  std::string model = testgen::tmp_path("cli_nb.model");
  CliResult train = run_cli({"nb", "train", "--data", data, "--label", "class", "--out", model});
  REQUIRE(train.code == 0);
  CHECK(train.out == "examples: 6\nattributes: 2\nclasses: 2\nmodel: " + model + "\n");
  std::string queries = testgen::write_file("cli_nb_query.csv", "a0,a1\n1,0\n");
  CliResult pred = run_cli({"nb", "predict", "--model", model, "--data", queries});
  REQUIRE(pred.code == 0);
  CHECK(pred.out == "0\tpos\t0.333333\t0.666667\n");
}

TEST_CASE("bbn query without evidence repeats the initial beliefs") {
  CliResult r = run_cli({"bbn", "query", "--net", chain_net()});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "node\tstate\tinitial\trevised\n"
        "A\ta0\t0.700000\t0.700000\n"
        "A\ta1\t0.300000\t0.300000\n"
        "B\tb0\t0.590000\t0.590000\n"
        "B\tb1\t0.410000\t0.410000\n");
}

TEST_CASE("bbn query revises beliefs from evidence") {
  std::string net = chain_net();
  CliResult r = run_cli({"bbn", "query", "--net", net, "--evidence", "B=b1"});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "node\tstate\tinitial\trevised\n"
        "A\ta0\t0.700000\t0.341463\n"
        "A\ta1\t0.300000\t0.658537\n"
        "B\tb0\t0.590000\t0.000000\n"
        "B\tb1\t0.410000\t1.000000\n");
  CliResult again = run_cli({"bbn", "query", "--net", net, "--evidence", "B=b1"});
  CHECK(again.out == r.out);
}

TEST_CASE("bbn query rejects malformed evidence") {
  CliResult r = run_cli({"bbn", "query", "--net", chain_net(), "--evidence", "B="});
  CHECK(r.code == 2);
  CHECK(r.err.find("bad evidence token") != std::string::npos);
  CliResult dup = run_cli({"bbn", "query", "--net", chain_net(), "--evidence", "B=b1,B=b0"});
  CHECK(dup.code == 2);
  CHECK(dup.err.find("duplicate evidence") != std::string::npos);
}

TEST_CASE("bbn validate counts nodes and edges") {
  CliResult r = run_cli({"bbn", "validate", "--net", chain_net()});
  REQUIRE(r.code == 0);
  CHECK(r.out == "nodes: 2\nedges: 1\nok\n");
}

TEST_CASE("aa run traces merged predictions and posterior weights") {
  std::string stream = testgen::write_file("cli_stream.tsv", "0.9\t0.4\t1\n0.8\t0.3\t0\n");
  CliResult r = run_cli({"aa", "run", "--stream", stream});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out ==
        "0\t0.650000\t0.69230769\t0.30769231\n"
        "1\t0.646154\t0.39130435\t0.60869565\n");
  CliResult again = run_cli({"aa", "run", "--stream", stream});
  CHECK(again.out == r.out);
}

TEST_CASE("aa run honors prior and loss flags") {
  std::string stream = testgen::write_file("cli_vote.tsv", "1\t0\t1\n");
  CliResult r = run_cli(
      {"aa", "run", "--stream", stream, "--prior", "3,1", "--loss", "zero_one"});
  REQUIRE(r.code == 0);
  std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 1);
  std::vector<std::string> f = fields_of(lines[0]);
  REQUIRE(f.size() == 4);
  CHECK(f[1] == "1.000000");
}

TEST_CASE("aa run rejects a bad outcome column") {
  std::string stream = testgen::write_file("cli_bad_stream.tsv", "0.5\t0.5\t2\n");
  CliResult r = run_cli({"aa", "run", "--stream", stream});
  CHECK(r.code == 2);
  CHECK(r.err.find("outcome must be 0 or 1") != std::string::npos);
}

TEST_CASE("eval renders the consultant-style accuracy report") {
  std::string pred_text, truth_text = "x,class\n";
  for (int i = 0; i < 25; ++i) {
    pred_text += std::to_string(i) + "\t" + (i < 19 ? "App" : "Dys") + "\n";
    truth_text += "0,App\n";
  }
  std::string pred = testgen::write_file("cli_eval_pred.tsv", pred_text);
  std::string truth = testgen::write_file("cli_eval_truth.csv", truth_text);
  CliResult r = run_cli({"eval", "--pred", pred, "--truth", truth, "--label", "class"});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "total: 25\nscored: 25\ncorrect: 19\naccuracy: 76.0%\ncoverage: 1.000000\n"
        "class App: 19/25\n");
}

TEST_CASE("eval remaps truth labels before scoring") {
  std::string pred = testgen::write_file("cli_map_pred.tsv", "0\tApp\n1\tApp\n2\tApp\n3\tDys\n");
  std::string truth =
      testgen::write_file("cli_map_truth.csv", "x,class\n0,+1\n0,+1\n0,-1\n0,-1\n");
  CliResult r = run_cli({"eval", "--pred", pred, "--truth", truth, "--label", "class", "--map",
                         "+1=App,-1=Dys"});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "total: 4\nscored: 4\ncorrect: 3\naccuracy: 75.0%\ncoverage: 1.000000\n"
        "class App: 2/2\nclass Dys: 1/2\n");
}

TEST_CASE("evaluate scores only non-abstaining predictions") {
  mlkit::cli::EvalReport all = mlkit::cli::evaluate({"a", "b"}, {"a", "b"});
  CHECK(all.accuracy_percent == 100.0);
  CHECK(all.coverage == 1.0);
  mlkit::cli::EvalReport half = mlkit::cli::evaluate({"a", "a"}, {"a", "b"});
  CHECK(half.accuracy_percent == 50.0);
  mlkit::cli::EvalReport abstain =
      mlkit::cli::evaluate({"a", "NONE", "b", "NONE"}, {"a", "b", "b", "a"});
  CHECK(abstain.total == 4);
  CHECK(abstain.n == 2);
  CHECK(abstain.correct == 2);
  CHECK(abstain.accuracy_percent == 100.0);
  CHECK(abstain.coverage == 0.5);
  CHECK(abstain.per_class.at("a").n == 1);
  CHECK(abstain.per_class.at("b").n == 1);
}

TEST_CASE("an all-abstaining report renders accuracy as n/a") {
  std::ostringstream os;
  mlkit::cli::render_report(mlkit::cli::evaluate({"NONE", "NONE"}, {"a", "b"}), os);
  CHECK(os.str() == "total: 2\nscored: 0\ncorrect: 0\naccuracy: n/a\ncoverage: 0.000000\n");
}

TEST_CASE("evaluate validates its inputs") {
  CHECK_THROWS_WITH_AS(mlkit::cli::evaluate({"a"}, {"a", "b"}),
                       doctest::Contains("length mismatch"), std::runtime_error);
  CHECK_THROWS_WITH_AS(mlkit::cli::evaluate({}, {}), doctest::Contains("empty input"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(mlkit::cli::evaluate({"a"}, {"NONE"}),
                       doctest::Contains("invalid truth label"), std::runtime_error);
}

}  // TEST_SUITE
