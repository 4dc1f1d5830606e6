#include "mlkit/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mlkit/text.hpp"

namespace mlkit::tabular {

ChiSquareResult chi_square(const ContingencyTable& t) {
  double a = static_cast<double>(t.a), b = static_cast<double>(t.b);
  double c = static_cast<double>(t.c), d = static_cast<double>(t.d);
  double r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;
  if (r1 == 0.0 || r2 == 0.0 || c1 == 0.0 || c2 == 0.0) return {0.0, true};
  double det = a * d - b * c;
  double n = r1 + r2;
  return {n * det * det / (r1 * r2 * c1 * c2), false};
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::runtime_error("p must be in (0,1)");
  // Acklam's rational approximation in three regions.
  static const double A[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double C[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  } else if (p <= phigh) {
    double q = p - 0.5, r = q * q;
    x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
        (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }
  // One Halley step against the exact CDF brings this to machine precision.
  double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

Interval confidence_interval(std::uint64_t successes, std::uint64_t n, double level) {
  if (n == 0) throw std::runtime_error("n must be >= 1");
  if (successes > n) throw std::runtime_error("successes exceed n");
  if (!(level > 0.0 && level < 1.0)) throw std::runtime_error("level must be in (0,1)");
  double z = inverse_normal_cdf(0.5 * (1.0 + level));
  double nn = static_cast<double>(n);
  double ph = static_cast<double>(successes) / nn;
  double z2 = z * z;
  double denom = 1.0 + z2 / nn;
  double center = (ph + z2 / (2.0 * nn)) / denom;
  double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
  // At the boundary counts the exact limits are 0 and 1; rounding would
  // otherwise leave residues like 1e-17.
  double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  double hi = successes == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

namespace {

bool is_binary(double v) { return v == 0.0 || v == 1.0; }

void check_binary_attributes(const Dataset& ds) {
  for (const Example& e : ds.examples)
    for (double v : e.features)
      if (!is_binary(v)) throw std::runtime_error("non-binary attribute value");
}

struct GtBuilder {
  const Dataset& ds;
  const std::string& class_id;
  std::size_t min_leaf;
  std::size_t depth_cap;
  double level;
  RuleSet out;

  bool in_class(std::size_t idx) const { return ds.examples[idx].label == class_id; }

  void emit(const std::vector<std::size_t>& subset, const std::vector<AttributeTest>& path) {
    std::size_t in = 0;
    for (std::size_t idx : subset)
      if (in_class(idx)) ++in;
    RuleLeaf leaf;
    leaf.condition = path;
    leaf.p = static_cast<double>(in) / static_cast<double>(subset.size());
    leaf.interval = confidence_interval(in, subset.size(), level);
    leaf.support_n = subset.size();
    out.leaves.push_back(std::move(leaf));
  }

  void grow(const std::vector<std::size_t>& subset, std::vector<AttributeTest>& path,
            std::size_t depth) {
    std::size_t in = 0;
    for (std::size_t idx : subset)
      if (in_class(idx)) ++in;
    bool homogeneous = (in == 0 || in == subset.size());
    if (homogeneous || subset.size() <= min_leaf || depth >= depth_cap) {
      emit(subset, path);
      return;
    }
    // Highest chi-square attribute for class-vs-rest; ties keep the lowest index.
    double best = 0.0;
    std::ptrdiff_t best_attr = -1;
    for (std::size_t attr = 0; attr < ds.dim(); ++attr) {
      ContingencyTable t;
      for (std::size_t idx : subset) {
        bool present = ds.examples[idx].features[attr] == 1.0;
        bool in_c = in_class(idx);
        if (present && in_c) ++t.a;
        else if (present) ++t.b;
        else if (in_c) ++t.c;
        else ++t.d;
      }
      ChiSquareResult r = chi_square(t);
      if (!r.degenerate && r.value > best) {
        best = r.value;
        best_attr = static_cast<std::ptrdiff_t>(attr);
      }
    }
    if (best_attr < 0) {  // every attribute scored zero
      emit(subset, path);
      return;
    }
    std::size_t attr = static_cast<std::size_t>(best_attr);
    std::vector<std::size_t> include, exclude;
    for (std::size_t idx : subset)
      (ds.examples[idx].features[attr] == 1.0 ? include : exclude).push_back(idx);
    // A positive chi-square needs both attribute values present, so neither
    // side is empty.
    path.push_back({attr, true});
    grow(include, path, depth + 1);
    path.back().expect_true = false;
    grow(exclude, path, depth + 1);
    path.pop_back();
  }
};

}  // namespace

RuleSet gt_learn(const Dataset& ds, const std::string& class_id, std::size_t min_leaf,
                 std::size_t max_depth, double level) {
  RuleSet rs;
  rs.class_id = class_id;
  if (ds.size() == 0) return rs;
  if (!ds.has_class(class_id)) throw std::runtime_error("unknown class: " + class_id);
  check_binary_attributes(ds);
  GtBuilder builder{ds, class_id, min_leaf, max_depth == 0 ? ds.dim() : max_depth, level, std::move(rs)};
  std::vector<std::size_t> all(ds.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<AttributeTest> path;
  builder.grow(all, path, 0);
  builder.out.class_id = class_id;
  return std::move(builder.out);
}

std::vector<RuleSet> gt_learn_all(const Dataset& ds, std::size_t min_leaf, std::size_t max_depth,
                                  double level) {
  std::vector<RuleSet> out;
  for (const std::string& c : ds.class_set) out.push_back(gt_learn(ds, c, min_leaf, max_depth, level));
  return out;
}

namespace {

bool matches(const RuleLeaf& leaf, const std::vector<double>& x) {
  for (const AttributeTest& t : leaf.condition) {
    if (t.attribute >= x.size()) throw std::runtime_error("dimension mismatch");
    if ((x[t.attribute] != 0.0) != t.expect_true) return false;
  }
  return true;
}

}  // namespace

GtPrediction gt_predict(const std::vector<RuleSet>& rulesets, const std::vector<double>& x) {
  const RuleSet* best_rs = nullptr;
  const RuleLeaf* best_leaf = nullptr;
  for (const RuleSet& rs : rulesets) {
    const RuleLeaf* hit = nullptr;
    for (const RuleLeaf& leaf : rs.leaves)
      if (matches(leaf, x)) {
        hit = &leaf;
        break;
      }
    if (!hit) continue;  // possible under depth caps; skip the class
    bool better = false;
    if (!best_leaf)
      better = true;
    else if (hit->p != best_leaf->p)
      better = hit->p > best_leaf->p;
    else
      better = rs.class_id < best_rs->class_id;
    if (better) {
      best_rs = &rs;
      best_leaf = hit;
    }
  }
  if (!best_leaf) throw std::runtime_error("no prediction");
  return {best_rs->class_id, best_leaf->p, best_leaf->interval, best_leaf->support_n};
}

void write_rulesets(const std::vector<RuleSet>& rs, std::ostream& os) {
  for (const RuleSet& r : rs)
    for (const RuleLeaf& leaf : r.leaves) {
      os << r.class_id;
      for (const AttributeTest& t : leaf.condition)
        os << ' ' << (t.expect_true ? '+' : '-') << t.attribute;
      os << ' ' << fmt_double(leaf.p) << ' ' << fmt_double(leaf.interval.lo) << ' '
         << fmt_double(leaf.interval.hi) << ' ' << leaf.support_n << '\n';
    }
}

std::vector<RuleSet> read_rulesets(std::istream& is) {
  std::vector<RuleSet> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> tok = split_ws(line);
    if (tok.size() < 5)
      throw std::runtime_error("ruleset line " + std::to_string(lineno) + ": too few fields");
    RuleLeaf leaf;
    leaf.p = to_double(tok[tok.size() - 4]);
    leaf.interval.lo = to_double(tok[tok.size() - 3]);
    leaf.interval.hi = to_double(tok[tok.size() - 2]);
    leaf.support_n = static_cast<std::size_t>(to_int(tok[tok.size() - 1]));
    for (std::size_t i = 1; i + 4 < tok.size(); ++i) {
      const std::string& t = tok[i];
      if (t.size() < 2 || (t[0] != '+' && t[0] != '-'))
        throw std::runtime_error("ruleset line " + std::to_string(lineno) + ": bad condition token: " + t);
      AttributeTest at;
      at.expect_true = t[0] == '+';
      at.attribute = static_cast<std::size_t>(to_int(t.substr(1)));
      leaf.condition.push_back(at);
    }
    if (out.empty() || out.back().class_id != tok[0]) {
      RuleSet rs;
      rs.class_id = tok[0];
      out.push_back(std::move(rs));
    }
    out.back().leaves.push_back(std::move(leaf));
  }
  return out;
}

void save_rulesets(const std::vector<RuleSet>& rs, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open file: " + path);
  write_rulesets(rs, os);
}

std::vector<RuleSet> load_rulesets(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open file: " + path);
  return read_rulesets(is);
}

NbModel nb_train(const Dataset& ds, double smoothing) {
  if (ds.size() == 0) throw std::runtime_error("empty dataset");
  if (smoothing < 0.0) throw std::runtime_error("smoothing must be >= 0");
  check_binary_attributes(ds);
  NbModel m;
  m.attribute_names = ds.attribute_names;
  m.classes = ds.class_set;
  m.smoothing = smoothing;
  if (m.classes.empty()) throw std::runtime_error("no labeled examples");
  const std::size_t k = m.classes.size(), d = ds.dim();
  std::vector<double> class_count(k, 0.0);
  std::vector<std::vector<double>> present(k, std::vector<double>(d, 0.0));
  std::size_t labeled = 0;
  for (const Example& e : ds.examples) {
    if (e.label.empty()) continue;
    ++labeled;
    std::size_t ci = static_cast<std::size_t>(
        std::lower_bound(m.classes.begin(), m.classes.end(), e.label) - m.classes.begin());
    class_count[ci] += 1.0;
    for (std::size_t a = 0; a < d; ++a)
      if (e.features[a] == 1.0) present[ci][a] += 1.0;
  }
  m.priors.resize(k);
  m.conditionals.assign(k, std::vector<double>(d, 0.0));
  for (std::size_t c = 0; c < k; ++c) {
    m.priors[c] = (class_count[c] + smoothing) /
                  (static_cast<double>(labeled) + smoothing * static_cast<double>(k));
    for (std::size_t a = 0; a < d; ++a)
      m.conditionals[c][a] = (present[c][a] + smoothing) / (class_count[c] + 2.0 * smoothing);
  }
  return m;
}

std::vector<double> nb_predict(const NbModel& m, const std::vector<double>& x) {
  if (x.size() != m.attribute_names.size()) throw std::runtime_error("dimension mismatch");
  for (double v : x)
    if (!is_binary(v)) throw std::runtime_error("non-binary attribute value");
  const std::size_t k = m.classes.size();
  std::vector<double> logp(k);
  for (std::size_t c = 0; c < k; ++c) {
    double s = std::log(m.priors[c]);
    for (std::size_t a = 0; a < x.size(); ++a) {
      double pc = m.conditionals[c][a];
      s += std::log(x[a] == 1.0 ? pc : 1.0 - pc);
    }
    logp[c] = s;
  }
  double mx = *std::max_element(logp.begin(), logp.end());
  if (!std::isfinite(mx)) throw std::runtime_error("zero likelihood for every class");
  std::vector<double> post(k);
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    post[c] = std::exp(logp[c] - mx);
    total += post[c];
  }
  for (double& v : post) v /= total;
  return post;
}

void write_nb(const NbModel& m, std::ostream& os) {
  os << "classes " << m.classes.size() << " attributes " << m.attribute_names.size()
     << " smoothing " << fmt_double(m.smoothing) << '\n';
  os << "attrs";
  for (const std::string& a : m.attribute_names) os << ' ' << a;
  os << '\n';
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    os << "class " << m.classes[c] << ' ' << fmt_double(m.priors[c]);
    for (double v : m.conditionals[c]) os << ' ' << fmt_double(v);
    os << '\n';
  }
}

NbModel read_nb(std::istream& is) {
  NbModel m;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("model file: missing header");
  std::vector<std::string> tok = split_ws(line);
  if (tok.size() != 6 || tok[0] != "classes" || tok[2] != "attributes" || tok[4] != "smoothing")
    throw std::runtime_error("model file: bad header");
  std::size_t k = static_cast<std::size_t>(to_int(tok[1]));
  std::size_t d = static_cast<std::size_t>(to_int(tok[3]));
  m.smoothing = to_double(tok[5]);
  if (!std::getline(is, line)) throw std::runtime_error("model file: missing attrs line");
  tok = split_ws(line);
  if (tok.empty() || tok[0] != "attrs" || tok.size() != d + 1)
    throw std::runtime_error("model file: bad attrs line");
  m.attribute_names.assign(tok.begin() + 1, tok.end());
  for (std::size_t c = 0; c < k; ++c) {
    if (!std::getline(is, line)) throw std::runtime_error("model file: missing class line");
    tok = split_ws(line);
    if (tok.size() != d + 3 || tok[0] != "class")
      throw std::runtime_error("model file: bad class line");
    m.classes.push_back(tok[1]);
    m.priors.push_back(to_double(tok[2]));
    std::vector<double> cond;
    for (std::size_t a = 0; a < d; ++a) cond.push_back(to_double(tok[3 + a]));
    m.conditionals.push_back(std::move(cond));
  }
  return m;
}

void save_nb(const NbModel& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open file: " + path);
  write_nb(m, os);
}

NbModel load_nb(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open file: " + path);
  return read_nb(is);
}

}  // namespace mlkit::tabular
