#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlkit/dataset.hpp"
#include "mlkit/svm.hpp"

namespace mlkit::transduce {

// BLACK maps to +1, WHITE to -1.
enum class Label { BLACK, WHITE, NONE };

std::string to_string(Label l);

struct TransductiveVerdict {
  Label label = Label::NONE;
  std::optional<double> confidence;  // absent iff label == NONE
  std::size_t sv_count_black = 0;    // support vectors of the black picture
  std::size_t sv_count_white = 0;    // support vectors of the white picture
  bool in_sv_black = false;          // query is a support vector there
  bool in_sv_white = false;
  bool fallback = false;             // neither picture kept the query as an SV
};

// Retrains twice with the query appended as +1 (black picture) and as -1
// (white picture), then compares support-vector memberships and counts.
// Confidence is 1 - #SV(rejected picture)/l with l = |train| + 1.
TransductiveVerdict classify_with_confidence(const Dataset& train, const std::vector<double>& x,
                                             const svm::KernelSpec& k,
                                             double box_c = svm::kDefaultBoxC);

// Independent per-point transduction; verdict i corresponds to test row i.
std::vector<TransductiveVerdict> batch_transduce(const Dataset& train, const Dataset& test,
                                                 const svm::KernelSpec& k,
                                                 double box_c = svm::kDefaultBoxC);

}  // namespace mlkit::transduce
