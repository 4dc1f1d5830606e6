#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mlkit/dataset.hpp"

namespace mlkit::tabular {

// 2x2 contingency table:
//                 class  not-class
//   attr present    a        b
//   attr absent     c        d
struct ContingencyTable {
  std::uint64_t a = 0, b = 0, c = 0, d = 0;
  std::uint64_t total() const { return a + b + c + d; }
};

struct ChiSquareResult {
  double value = 0.0;
  bool degenerate = false;  // some marginal was zero; value forced to 0
};

// N*(ad-bc)^2 / ((a+b)(c+d)(a+c)(b+d)), no continuity correction.
ChiSquareResult chi_square(const ContingencyTable& t);

struct Interval {
  double lo = 0.0, hi = 0.0;
};

// Wilson score interval for a binomial proportion, clipped to [0, 1].
Interval confidence_interval(std::uint64_t successes, std::uint64_t n, double level);

// Inverse standard normal CDF (rational approximation plus one Halley step).
double inverse_normal_cdf(double p);

struct AttributeTest {
  std::size_t attribute = 0;
  bool expect_true = true;  // branch taken when the attribute equals 1
};

struct RuleLeaf {
  std::vector<AttributeTest> condition;  // conjunction along the path
  double p = 0.0;                        // class fraction among matching examples
  Interval interval;                     // Wilson interval for p
  std::size_t support_n = 0;             // matching training examples
};

struct RuleSet {
  std::string class_id;
  std::vector<RuleLeaf> leaves;  // conditions are mutually exclusive and exhaustive
};

// Recursive class-vs-rest partitioning on the attribute with the largest
// chi-square statistic; include side first. Splitting stops on homogeneous or
// min_leaf-sized subsets, at max_depth (0 means the attribute count), and when
// every attribute's statistic is zero. Attributes must be binary.
RuleSet gt_learn(const Dataset& ds, const std::string& class_id, std::size_t min_leaf = 1,
                 std::size_t max_depth = 0, double level = 0.95);
std::vector<RuleSet> gt_learn_all(const Dataset& ds, std::size_t min_leaf = 1,
                                  std::size_t max_depth = 0, double level = 0.95);

struct GtPrediction {
  std::string class_id;
  double p = 0.0;
  Interval interval;
  std::size_t support_n = 0;
};

// Routes x to the matching leaf of each class's rule set and picks the class
// with the largest leaf p; ties break to the lexicographically smaller id.
GtPrediction gt_predict(const std::vector<RuleSet>& rulesets, const std::vector<double>& x);

void write_rulesets(const std::vector<RuleSet>& rs, std::ostream& os);
std::vector<RuleSet> read_rulesets(std::istream& is);
void save_rulesets(const std::vector<RuleSet>& rs, const std::string& path);
std::vector<RuleSet> load_rulesets(const std::string& path);

struct NbModel {
  std::vector<std::string> attribute_names;
  std::vector<std::string> classes;               // sorted
  std::vector<double> priors;                     // per class
  std::vector<std::vector<double>> conditionals;  // [class][attribute] = P(attr=1 | class)
  double smoothing = 1.0;
};

// Binary-attribute simple Bayes with additive smoothing.
NbModel nb_train(const Dataset& ds, double smoothing = 1.0);
// Posterior over classes, normalized, in the model's class order; log-space.
std::vector<double> nb_predict(const NbModel& m, const std::vector<double>& x);

void write_nb(const NbModel& m, std::ostream& os);
NbModel read_nb(std::istream& is);
void save_nb(const NbModel& m, const std::string& path);
NbModel load_nb(const std::string& path);

}  // namespace mlkit::tabular
