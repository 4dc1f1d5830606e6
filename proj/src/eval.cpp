#include "mlkit/eval.hpp"

#include <ostream>
#include <stdexcept>

#include "mlkit/text.hpp"

namespace mlkit::cli {

EvalReport evaluate(const std::vector<std::string>& predictions,
                    const std::vector<std::string>& truth) {
  if (predictions.size() != truth.size()) throw std::runtime_error("length mismatch");
  if (predictions.empty()) throw std::runtime_error("empty input");
  EvalReport r;
  r.total = predictions.size();
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (truth[i] == kAbstainToken || truth[i].empty())
      throw std::runtime_error("invalid truth label at row " + std::to_string(i));
    if (predictions[i] == kAbstainToken) continue;
    ClassStats& cs = r.per_class[truth[i]];
    ++r.n;
    ++cs.n;
    if (predictions[i] == truth[i]) {
      ++r.correct;
      ++cs.correct;
    }
  }
  if (r.n > 0)
    r.accuracy_percent = 100.0 * static_cast<double>(r.correct) / static_cast<double>(r.n);
  r.coverage = static_cast<double>(r.n) / static_cast<double>(r.total);
  return r;
}

void render_report(const EvalReport& r, std::ostream& os) {
  os << "total: " << r.total << '\n';
  os << "scored: " << r.n << '\n';
  os << "correct: " << r.correct << '\n';
  if (r.n > 0)
    os << "accuracy: " << fmt_fixed(r.accuracy_percent, 1) << "%\n";
  else
    os << "accuracy: n/a\n";
  os << "coverage: " << fmt_fixed(r.coverage, 6) << '\n';
  for (const auto& [cls, cs] : r.per_class)
    os << "class " << cls << ": " << cs.correct << '/' << cs.n << '\n';
}

}  // namespace mlkit::cli
