#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "mlkit/dataset.hpp"

namespace mlkit::svm {

struct KernelSpec {
  enum class Kind { linear, polynomial, rbf };
  Kind kind = Kind::linear;
  int degree = 3;      // polynomial
  double gamma = 1.0;  // rbf

  static KernelSpec linear() { return {Kind::linear, 3, 1.0}; }
  static KernelSpec polynomial(int degree);
  static KernelSpec rbf(double gamma);
  std::string describe() const;
};

// linear: x.y   polynomial: (x.y + 1)^degree   rbf: exp(-gamma*|x-y|^2)
double kernel_eval(const KernelSpec& k, const std::vector<double>& x, const std::vector<double>& y);

inline constexpr double kDefaultBoxC = 1000.0;
inline constexpr double kDefaultTol = 1e-8;
inline constexpr double kDefaultSvTolerance = 1e-6;
inline constexpr std::size_t kMaxIterations = 100000;

struct SvmModel {
  std::vector<double> alphas;   // one per training example, in [0, box_c]
  double bias = 0.0;
  KernelSpec kernel;
  Dataset training_examples;    // labels "+1"/"-1"
  double sv_tolerance = kDefaultSvTolerance;
  double box_c = kDefaultBoxC;

  // solver diagnostics
  std::size_t iterations = 0;
  double kkt_gap = 0.0;
  bool converged = false;

  bool is_support_vector(std::size_t i) const { return alphas[i] > sv_tolerance; }
  std::vector<std::size_t> support_vector_indices() const;
};

// Maximizes the dual sum(a) - 1/2 sum a_i a_j c_i c_j K(x_i,x_j) subject to
// 0 <= a_i <= box_c and sum a_i c_i = 0, by pairwise coordinate ascent on the
// most violating pair, to KKT gap <= tol.
SvmModel train(const Dataset& ds, const KernelSpec& k, double box_c = kDefaultBoxC,
               double tol = kDefaultTol);

// f(x) = sum_i a_i c_i K(x_i, x) + bias
double decision_value(const SvmModel& m, const std::vector<double>& x);
// sign of f(x); exact zero maps to +1
int predict(const SvmModel& m, const std::vector<double>& x);
// #SV / training size; warns on an empty support-vector set
double loo_bound(const SvmModel& m);

// Dual objective at the trained multipliers.
double dual_objective(const SvmModel& m);

void write_model(const SvmModel& m, std::ostream& os);
SvmModel read_model(std::istream& is);
void save_model(const SvmModel& m, const std::string& path);
SvmModel load_model(const std::string& path);

}  // namespace mlkit::svm
