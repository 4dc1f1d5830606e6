#include "mlkit/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mlkit/text.hpp"

namespace mlkit::svm {

KernelSpec KernelSpec::polynomial(int degree) {
  if (degree < 1) throw std::runtime_error("polynomial degree must be >= 1");
  return {Kind::polynomial, degree, 1.0};
}

KernelSpec KernelSpec::rbf(double gamma) {
  if (!(gamma > 0.0)) throw std::runtime_error("rbf gamma must be > 0");
  return {Kind::rbf, 3, gamma};
}

std::string KernelSpec::describe() const {
  switch (kind) {
    case Kind::linear: return "linear";
    case Kind::polynomial: return "polynomial degree=" + std::to_string(degree);
    case Kind::rbf: return "rbf gamma=" + fmt_double(gamma);
  }
  return "?";
}

double kernel_eval(const KernelSpec& k, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::runtime_error("dimension mismatch");
  switch (k.kind) {
    case KernelSpec::Kind::linear: {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return dot;
    }
    case KernelSpec::Kind::polynomial: {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return std::pow(dot + 1.0, k.degree);
    }
    case KernelSpec::Kind::rbf: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        d2 += d * d;
      }
      return std::exp(-k.gamma * d2);
    }
  }
  throw std::runtime_error("bad kernel");
}

std::vector<std::size_t> SvmModel::support_vector_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    if (is_support_vector(i)) out.push_back(i);
  return out;
}

SvmModel train(const Dataset& ds, const KernelSpec& k, double box_c, double tol) {
  if (ds.size() == 0) throw std::runtime_error("empty dataset");
  if (!(box_c > 0.0)) throw std::runtime_error("box_c must be > 0");
  std::vector<int> y = signed_labels(ds);
  bool has_pos = false, has_neg = false;
  for (int c : y) (c > 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw std::runtime_error("need two classes");

  const std::size_t n = ds.size();
  // Q_ij = y_i y_j K(x_i, x_j), kept dense; training sets here are small.
  std::vector<std::vector<double>> Q(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double v = y[i] * y[j] * kernel_eval(k, ds.examples[i].features, ds.examples[j].features);
      Q[i][j] = v;
      Q[j][i] = v;
    }

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a at a = 0

  std::size_t iter = 0;
  double gap = std::numeric_limits<double>::infinity();
  bool converged = false;
  const double inf = std::numeric_limits<double>::infinity();

  while (iter < kMaxIterations) {
    // Most violating pair: i maximizes -y_t grad_t over I_up, j minimizes it
    // over I_low. Optimality when the spread drops to tol.
    double m_up = -inf, m_low = inf;
    std::ptrdiff_t i = -1, j = -1;
    for (std::size_t t = 0; t < n; ++t) {
      bool up = (y[t] > 0) ? alpha[t] < box_c : alpha[t] > 0.0;
      bool low = (y[t] > 0) ? alpha[t] > 0.0 : alpha[t] < box_c;
      double v = -y[t] * grad[t];
      if (up && v > m_up) {
        m_up = v;
        i = static_cast<std::ptrdiff_t>(t);
      }
      if (low && v < m_low) {
        m_low = v;
        j = static_cast<std::ptrdiff_t>(t);
      }
    }
    gap = m_up - m_low;
    if (i < 0 || j < 0 || gap <= tol) {
      converged = true;
      break;
    }
    const std::size_t a = static_cast<std::size_t>(i);
    const std::size_t b = static_cast<std::size_t>(j);

    double old_a = alpha[a], old_b = alpha[b];
    if (y[a] != y[b]) {
      double quad = Q[a][a] + Q[b][b] + 2.0 * Q[a][b];
      if (quad <= 0.0) quad = 1e-12;
      double delta = (-grad[a] - grad[b]) / quad;
      double diff = alpha[a] - alpha[b];
      alpha[a] += delta;
      alpha[b] += delta;
      if (diff > 0.0 && alpha[b] < 0.0) {
        alpha[b] = 0.0;
        alpha[a] = diff;
      } else if (diff <= 0.0 && alpha[a] < 0.0) {
        alpha[a] = 0.0;
        alpha[b] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[a] > box_c) {
          alpha[a] = box_c;
          alpha[b] = box_c - diff;
        }
      } else {
        if (alpha[b] > box_c) {
          alpha[b] = box_c;
          alpha[a] = box_c + diff;
        }
      }
    } else {
      double quad = Q[a][a] + Q[b][b] - 2.0 * Q[a][b];
      if (quad <= 0.0) quad = 1e-12;
      double delta = (grad[a] - grad[b]) / quad;
      double sum = alpha[a] + alpha[b];
      alpha[a] -= delta;
      alpha[b] += delta;
      if (sum > box_c) {
        if (alpha[a] > box_c) {
          alpha[a] = box_c;
          alpha[b] = sum - box_c;
        }
      } else {
        if (alpha[b] < 0.0) {
          alpha[b] = 0.0;
          alpha[a] = sum;
        }
      }
      if (sum > box_c) {
        if (alpha[b] > box_c) {
          alpha[b] = box_c;
          alpha[a] = sum - box_c;
        }
      } else {
        if (alpha[a] < 0.0) {
          alpha[a] = 0.0;
          alpha[b] = sum;
        }
      }
    }

    double da = alpha[a] - old_a, db = alpha[b] - old_b;
    for (std::size_t t = 0; t < n; ++t) grad[t] += Q[t][a] * da + Q[t][b] * db;
    ++iter;
  }

  SvmModel m;
  m.alphas = std::move(alpha);
  m.kernel = k;
  m.training_examples = ds;
  m.box_c = box_c;
  m.iterations = iter;
  m.kkt_gap = gap;
  m.converged = converged;

  // Bias from the free multipliers: for sv_tol < a_t < C - sv_tol the KKT
  // conditions give y_t f(x_t) = 1, so y_t grad_t is the common offset.
  // Without free multipliers fall back to the midpoint of the feasible band.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double ub = inf, lb = -inf;
  for (std::size_t t = 0; t < n; ++t) {
    double yg = y[t] * grad[t];
    if (m.alphas[t] > m.sv_tolerance && m.alphas[t] < box_c - m.sv_tolerance) {
      free_sum += yg;
      ++free_count;
    } else {
      bool upper_side = (y[t] > 0) ? m.alphas[t] <= m.sv_tolerance : m.alphas[t] >= box_c - m.sv_tolerance;
      if (upper_side)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    }
  }
  double rho;
  if (free_count > 0)
    rho = free_sum / static_cast<double>(free_count);
  else
    rho = (ub + lb) / 2.0;
  m.bias = -rho;
  if (m.bias == 0.0) m.bias = 0.0;  // drop a negative-zero sign
  return m;
}

double decision_value(const SvmModel& m, const std::vector<double>& x) {
  double f = m.bias;
  std::vector<int> y = signed_labels(m.training_examples);
  for (std::size_t i = 0; i < m.alphas.size(); ++i) {
    if (m.alphas[i] == 0.0) continue;
    f += m.alphas[i] * y[i] * kernel_eval(m.kernel, m.training_examples.examples[i].features, x);
  }
  return f;
}

int predict(const SvmModel& m, const std::vector<double>& x) {
  return decision_value(m, x) >= 0.0 ? 1 : -1;
}

double loo_bound(const SvmModel& m) {
  std::size_t sv = m.support_vector_indices().size();
  if (sv == 0) {
    std::cerr << "warning: no support vectors; leave-one-out bound is vacuous\n";
    return 0.0;
  }
  return static_cast<double>(sv) / static_cast<double>(m.training_examples.size());
}

double dual_objective(const SvmModel& m) {
  const Dataset& ds = m.training_examples;
  std::vector<int> y = signed_labels(ds);
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < m.alphas.size(); ++i) {
    if (m.alphas[i] == 0.0) continue;
    lin += m.alphas[i];
    for (std::size_t j = 0; j < m.alphas.size(); ++j) {
      if (m.alphas[j] == 0.0) continue;
      quad += m.alphas[i] * m.alphas[j] * y[i] * y[j] *
              kernel_eval(m.kernel, ds.examples[i].features, ds.examples[j].features);
    }
  }
  return lin - 0.5 * quad;
}

void write_model(const SvmModel& m, std::ostream& os) {
  os << "kernel ";
  switch (m.kernel.kind) {
    case KernelSpec::Kind::linear: os << "linear"; break;
    case KernelSpec::Kind::polynomial: os << "polynomial " << m.kernel.degree; break;
    case KernelSpec::Kind::rbf: os << "rbf " << fmt_double(m.kernel.gamma); break;
  }
  os << '\n';
  os << "params " << fmt_double(m.box_c) << ' ' << fmt_double(m.sv_tolerance) << ' '
     << fmt_double(m.bias) << '\n';
  for (std::size_t i = 0; i < m.training_examples.size(); ++i) {
    const Example& e = m.training_examples.examples[i];
    os << e.label << ' ' << fmt_double(m.alphas[i]);
    for (double v : e.features) os << ' ' << fmt_double(v);
    os << '\n';
  }
}

SvmModel read_model(std::istream& is) {
  SvmModel m;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("model file: missing kernel line");
  {
    std::vector<std::string> tok = split_ws(line);
    if (tok.size() < 2 || tok[0] != "kernel") throw std::runtime_error("model file: bad kernel line");
    if (tok[1] == "linear") {
      m.kernel = KernelSpec::linear();
    } else if (tok[1] == "polynomial") {
      if (tok.size() < 3) throw std::runtime_error("model file: polynomial kernel needs a degree");
      m.kernel = KernelSpec::polynomial(to_int(tok[2]));
    } else if (tok[1] == "rbf") {
      if (tok.size() < 3) throw std::runtime_error("model file: rbf kernel needs a gamma");
      m.kernel = KernelSpec::rbf(to_double(tok[2]));
    } else {
      throw std::runtime_error("model file: unknown kernel: " + tok[1]);
    }
  }
  if (!std::getline(is, line)) throw std::runtime_error("model file: missing params line");
  {
    std::vector<std::string> tok = split_ws(line);
    if (tok.size() != 4 || tok[0] != "params") throw std::runtime_error("model file: bad params line");
    m.box_c = to_double(tok[1]);
    m.sv_tolerance = to_double(tok[2]);
    m.bias = to_double(tok[3]);
  }
  std::vector<Example> examples;
  std::size_t dim = 0;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> tok = split_ws(line);
    if (tok.size() < 3) throw std::runtime_error("model file: bad example line: " + line);
    if (tok[0] != "+1" && tok[0] != "-1")
      throw std::runtime_error("model file: bad label: " + tok[0]);
    Example e;
    e.label = tok[0];
    m.alphas.push_back(to_double(tok[1]));
    for (std::size_t t = 2; t < tok.size(); ++t) e.features.push_back(to_double(tok[t]));
    if (examples.empty())
      dim = e.features.size();
    else if (e.features.size() != dim)
      throw std::runtime_error("model file: inconsistent feature count");
    examples.push_back(std::move(e));
  }
  if (examples.empty()) throw std::runtime_error("model file: no examples");
  std::vector<std::string> names;
  for (std::size_t d = 0; d < dim; ++d) names.push_back("x" + std::to_string(d));
  m.training_examples = make_dataset(std::move(names), std::move(examples));
  return m;
}

void save_model(const SvmModel& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open file: " + path);
  write_model(m, os);
}

SvmModel load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open file: " + path);
  return read_model(is);
}

}  // namespace mlkit::svm
