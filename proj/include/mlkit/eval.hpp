#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace mlkit::cli {

inline constexpr const char* kAbstainToken = "NONE";

struct ClassStats {
  std::size_t n = 0;        // scored predictions whose truth is this class
  std::size_t correct = 0;
};

struct EvalReport {
  std::size_t total = 0;    // all predictions, abstentions included
  std::size_t n = 0;        // scored (non-NONE) predictions
  std::size_t correct = 0;
  double accuracy_percent = 0.0;  // 100*correct/n, meaningful when n > 0
  double coverage = 0.0;          // n/total
  std::map<std::string, ClassStats> per_class;
};

// NONE predictions count toward coverage only; accuracy is over the rest.
EvalReport evaluate(const std::vector<std::string>& predictions,
                    const std::vector<std::string>& truth);

// One line per quantity; accuracy in the "accuracy: 76.0%" percent style.
void render_report(const EvalReport& r, std::ostream& os);

}  // namespace mlkit::cli
