#include "mlkit/transduce.hpp"

#include <algorithm>
#include <stdexcept>

namespace mlkit::transduce {

std::string to_string(Label l) {
  switch (l) {
    case Label::BLACK: return "BLACK";
    case Label::WHITE: return "WHITE";
    case Label::NONE: return "NONE";
  }
  return "?";
}

namespace {

Dataset augmented(const Dataset& train, const std::vector<double>& x, const char* label) {
  Dataset out = train;
  Example e;
  e.features = x;
  e.label = label;
  if (e.features.size() != out.dim()) throw std::runtime_error("dimension mismatch");
  out.examples.push_back(std::move(e));
  auto it = std::lower_bound(out.class_set.begin(), out.class_set.end(), label);
  if (it == out.class_set.end() || *it != label) out.class_set.insert(it, label);
  return out;
}

}  // namespace

TransductiveVerdict classify_with_confidence(const Dataset& train, const std::vector<double>& x,
                                             const svm::KernelSpec& k, double box_c) {
  Dataset black_picture = augmented(train, x, "+1");
  Dataset white_picture = augmented(train, x, "-1");
  svm::SvmModel mb = svm::train(black_picture, k, box_c);
  svm::SvmModel mw = svm::train(white_picture, k, box_c);

  const std::size_t q = train.size();  // index of the query in both pictures
  const double l = static_cast<double>(train.size() + 1);

  TransductiveVerdict v;
  v.sv_count_black = mb.support_vector_indices().size();
  v.sv_count_white = mw.support_vector_indices().size();
  v.in_sv_black = mb.is_support_vector(q);
  v.in_sv_white = mw.is_support_vector(q);

  if (v.in_sv_black && !v.in_sv_white) {
    // Calling it black strains that picture while the white picture absorbs
    // it, so the point reads as white.
    v.label = Label::WHITE;
    v.confidence = 1.0 - static_cast<double>(v.sv_count_black) / l;
  } else if (v.in_sv_white && !v.in_sv_black) {
    v.label = Label::BLACK;
    v.confidence = 1.0 - static_cast<double>(v.sv_count_white) / l;
  } else if (v.in_sv_black && v.in_sv_white) {
    if (v.sv_count_black < v.sv_count_white) {
      v.label = Label::WHITE;
      v.confidence = 1.0 - static_cast<double>(v.sv_count_black) / l;
    } else if (v.sv_count_white < v.sv_count_black) {
      v.label = Label::BLACK;
      v.confidence = 1.0 - static_cast<double>(v.sv_count_white) / l;
    } else {
      v.label = Label::NONE;
    }
  } else {
    // In neither picture: numerically possible only through the support-vector
    // tolerance; fall back to the base inductive prediction.
    v.fallback = true;
    svm::SvmModel base = svm::train(train, k, box_c);
    v.label = svm::predict(base, x) > 0 ? Label::BLACK : Label::WHITE;
    v.confidence =
        1.0 - static_cast<double>(std::max(v.sv_count_black, v.sv_count_white)) / l;
  }
  return v;
}

std::vector<TransductiveVerdict> batch_transduce(const Dataset& train, const Dataset& test,
                                                 const svm::KernelSpec& k, double box_c) {
  std::vector<TransductiveVerdict> out;
  out.reserve(test.size());
  for (const Example& e : test.examples)
    out.push_back(classify_with_confidence(train, e.features, k, box_c));
  return out;
}

}  // namespace mlkit::transduce
