#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "mlkit/dataset.hpp"
#include "testgen.hpp"

using mlkit::CsvMode;
using mlkit::Dataset;
using mlkit::Example;

namespace {

std::string diagnosis_csv() {
  return "Pain,Fever,Diagnosis\n"
         "1,0,App\n"
         "0,1,Dys\n"
         "1,1,App\n";
}

// Multiset fingerprint of a dataset's rows for partition checks.
std::multiset<std::string> row_keys(const Dataset& ds) {
  std::multiset<std::string> keys;
  for (const Example& e : ds.examples) {
    std::string k = e.label;
    for (double v : e.features) k += "," + std::to_string(v);
    keys.insert(k);
  }
  return keys;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("load_csv reads a well-formed labeled file") {
  std::string path = testgen::write_file("diag3.csv", diagnosis_csv());
  Dataset ds = mlkit::load_csv(path, "Diagnosis", CsvMode::binary);
  CHECK(ds.size() == 3);
  CHECK(ds.dim() == 2);
  REQUIRE(ds.class_set.size() == 2);
  CHECK(ds.class_set[0] == "App");
  CHECK(ds.class_set[1] == "Dys");
  CHECK(ds.attribute_names == std::vector<std::string>{"Pain", "Fever"});
  CHECK(ds.label_name == "Diagnosis");
  CHECK(ds.examples[0].features == std::vector<double>{1.0, 0.0});
  CHECK(ds.examples[1].label == "Dys");
}

TEST_CASE("load_csv maps Y/N tokens in binary mode") {
  std::string path = testgen::write_file("diag_yn.csv",
                                         "Pain,Fever,Diagnosis\n"
                                         "Y,N,App\n"
                                         "N,Y,Dys\n");
  Dataset ds = mlkit::load_csv(path, "Diagnosis", CsvMode::binary);
  CHECK(ds.examples[0].features == std::vector<double>{1.0, 0.0});
  CHECK(ds.examples[1].features == std::vector<double>{0.0, 1.0});
}

TEST_CASE("load_csv rejects a header without the label column") {
  std::string path = testgen::write_file("nolabel.csv", "Pain,Fever\n1,0\n");
  CHECK_THROWS_WITH_AS(mlkit::load_csv(path, "Diagnosis", CsvMode::binary),
                       doctest::Contains("label column not found"), std::runtime_error);
}

TEST_CASE("load_csv names the row of a non-binary token") {
  std::string path = testgen::write_file("maybe.csv",
                                         "Pain,Fever,Diagnosis\n"
                                         "1,0,App\n"
                                         "maybe,1,Dys\n");
  CHECK_THROWS_WITH_AS(mlkit::load_csv(path, "Diagnosis", CsvMode::binary),
                       doctest::Contains("row 2"), std::runtime_error);
}

TEST_CASE("load_csv rejects ragged rows with the row number") {
  std::string path = testgen::write_file("ragged.csv",
                                         "Pain,Fever,Diagnosis\n"
                                         "1,0,App\n"
                                         "1,App\n");
  CHECK_THROWS_WITH_AS(mlkit::load_csv(path, "Diagnosis", CsvMode::binary),
                       doctest::Contains("ragged row 2"), std::runtime_error);
}

TEST_CASE("load_csv numeric mode parses real values and flags bad ones") {
  std::string path = testgen::write_file("nums.csv",
                                         "x0,x1,label\n"
                                         "-0.5,2.25,+1\n"
                                         "1e-3,3,-1\n");
  Dataset ds = mlkit::load_csv(path, "label", CsvMode::numeric);
  CHECK(ds.examples[0].features[0] == -0.5);
  CHECK(ds.examples[1].features[0] == 1e-3);

  std::string bad = testgen::write_file("badnum.csv", "x0,label\noops,+1\n");
  CHECK_THROWS_WITH_AS(mlkit::load_csv(bad, "label", CsvMode::numeric),
                       doctest::Contains("bad numeric value"), std::runtime_error);
}

TEST_CASE("load_csv_unlabeled marks every example unlabeled") {
  std::string path = testgen::write_file("unlab.csv", "x0,x1\n1,2\n3,4\n");
  Dataset ds = mlkit::load_csv_unlabeled(path, CsvMode::numeric);
  CHECK(ds.size() == 2);
  CHECK(ds.class_set.empty());
  CHECK(ds.examples[0].label.empty());
}

TEST_CASE("split partitions exactly with deterministic seeding") {
  std::mt19937_64 rng(11);
  Dataset ds = testgen::random_signed_dataset(rng, 10, 2);
  auto [a, b] = mlkit::split(ds, 0.5, 7);
  CHECK(a.size() == 5);
  CHECK(b.size() == 5);

  std::multiset<std::string> combined = row_keys(a);
  for (const std::string& k : row_keys(b)) combined.insert(k);
  CHECK(combined == row_keys(ds));

  auto [a2, b2] = mlkit::split(ds, 0.5, 7);
  CHECK(row_keys(a) == row_keys(a2));
  CHECK(a.examples.size() == a2.examples.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a.examples[i].features == a2.examples[i].features);
}

TEST_CASE("split sizes follow the floor rule") {
  std::mt19937_64 rng(12);
  Dataset ds = testgen::random_signed_dataset(rng, 10, 2);
  auto [a, b] = mlkit::split(ds, 0.3, 1);
  CHECK(a.size() == 3);
  CHECK(b.size() == 7);
}

TEST_CASE("split rejects bad inputs") {
  Dataset empty;
  CHECK_THROWS_WITH_AS(mlkit::split(empty, 0.5, 1), doctest::Contains("empty dataset"),
                       std::runtime_error);
  std::mt19937_64 rng(13);
  Dataset ds = testgen::random_signed_dataset(rng, 4, 1);
  CHECK_THROWS_WITH_AS(mlkit::split(ds, 1.0, 1), doctest::Contains("fraction"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(mlkit::split(ds, 0.0, 1), doctest::Contains("fraction"),
                       std::runtime_error);
}

TEST_CASE("summarize on the empty dataset is all zeros") {
  Dataset empty;
  mlkit::DatasetSummary s = mlkit::summarize(empty);
  CHECK(s.examples == 0);
  CHECK(s.attributes == 0);
  CHECK(s.per_class.empty());
}

TEST_CASE("summarize counts per class directly") {
  std::string path = testgen::write_file("diag3b.csv",
                                         "Pain,Fever,Diagnosis\n"
                                         "1,0,App\n"
                                         "0,1,Dys\n"
                                         "1,1,Ppu\n");
  Dataset ds = mlkit::load_csv(path, "Diagnosis", CsvMode::binary);
  mlkit::DatasetSummary s = mlkit::summarize(ds);
  CHECK(s.examples == 3);
  CHECK(s.attributes == 2);
  CHECK(s.per_class == std::map<std::string, std::size_t>{{"App", 1}, {"Dys", 1}, {"Ppu", 1}});
}

TEST_CASE("summarize handles a single-class dataset") {
  std::vector<Example> rows(6, Example{{1.0}, "App"});
  Dataset ds = mlkit::make_dataset({"a"}, rows);
  mlkit::DatasetSummary s = mlkit::summarize(ds);
  CHECK(s.per_class == std::map<std::string, std::size_t>{{"App", 6}});
}

TEST_CASE("write_csv then load_csv reproduces the dataset exactly") {
  std::vector<Example> rows = {
      {{0.1, -2.5e-17}, "pos"},
      {{1.0 / 3.0, 123456.789012345}, "neg"},
      {{-0.0, 9.999999999999999e22}, "pos"},
  };
  Dataset ds = mlkit::make_dataset({"u", "v"}, rows, "cls");
  std::string path = testgen::tmp_path("roundtrip.csv");
  mlkit::write_csv(ds, path);
  Dataset back = mlkit::load_csv(path, "cls", CsvMode::numeric);
  REQUIRE(back.size() == ds.size());
  CHECK(back.attribute_names == ds.attribute_names);
  CHECK(back.label_name == ds.label_name);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.examples[i].label == ds.examples[i].label);
    REQUIRE(back.examples[i].features.size() == 2);
    for (std::size_t d = 0; d < 2; ++d)
      CHECK(back.examples[i].features[d] == ds.examples[i].features[d]);
  }
}

TEST_CASE("relabel_binary maps the positive class to +1") {
  std::vector<Example> rows = {{{0.0}, "cat"}, {{1.0}, "dog"}, {{2.0}, "cat"}};
  Dataset ds = mlkit::make_dataset({"a"}, rows);
  Dataset signed_ds = mlkit::relabel_binary(ds, "dog");
  CHECK(signed_ds.examples[0].label == "-1");
  CHECK(signed_ds.examples[1].label == "+1");
  CHECK(signed_ds.examples[2].label == "-1");
  CHECK_THROWS_WITH_AS(mlkit::relabel_binary(ds, "bird"), doctest::Contains("unknown class"),
                       std::runtime_error);

  std::vector<Example> one = {{{0.0}, "cat"}};
  Dataset single = mlkit::make_dataset({"a"}, one);
  CHECK_THROWS_WITH_AS(mlkit::relabel_binary(single, "cat"),
                       doctest::Contains("need exactly two classes"), std::runtime_error);
}

TEST_CASE("signed_labels accepts only signed tokens") {
  std::vector<Example> rows = {{{0.0}, "+1"}, {{1.0}, "-1"}, {{2.0}, "1"}};
  Dataset ds = mlkit::make_dataset({"a"}, rows);
  CHECK(mlkit::signed_labels(ds) == std::vector<int>{1, -1, 1});

  std::vector<Example> bad = {{{0.0}, "cat"}};
  Dataset bad_ds = mlkit::make_dataset({"a"}, bad);
  CHECK_THROWS_WITH_AS(mlkit::signed_labels(bad_ds), doctest::Contains("labels must be"),
                       std::runtime_error);
}

TEST_CASE("make_dataset validates dimensions") {
  std::vector<Example> rows = {{{1.0, 2.0}, "a"}, {{1.0}, "b"}};
  CHECK_THROWS_AS(mlkit::make_dataset({"x", "y"}, rows), std::runtime_error);
}

}  // TEST_SUITE
