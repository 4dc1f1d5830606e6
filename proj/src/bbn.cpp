#include "mlkit/bbn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mlkit/text.hpp"

namespace mlkit::bbn {

std::size_t Node::state_index(const std::string& state) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == state) return i;
  throw std::runtime_error("unknown state " + state + " for node " + name);
}

std::size_t Network::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].name == name) return i;
  throw std::runtime_error("unknown node: " + name);
}

bool Network::has_node(const std::string& name) const {
  for (const Node& n : nodes)
    if (n.name == name) return true;
  return false;
}

namespace {

constexpr double kRowSumTolerance = 1e-9;

struct Statement {
  std::size_t lineno = 0;
  std::vector<std::string> tokens;
};

std::vector<std::string> split_states(const std::string& s) {
  std::vector<std::string> out = mlkit::split(s, ',');
  for (std::string& v : out) v = mlkit::trim(v);
  return out;
}

}  // namespace

Network parse_network(const std::string& text) {
  std::vector<Statement> stmts;
  {
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::vector<std::string> tok = split_ws(line);
      if (!tok.empty()) stmts.push_back({lineno, std::move(tok)});
    }
  }

  Network net;
  for (const Statement& st : stmts) {
    const std::vector<std::string>& tok = st.tokens;
    if (tok[0] != "node") continue;
    if (tok.size() != 4 || tok[2] != "states")
      throw std::runtime_error("line " + std::to_string(st.lineno) +
                               ": expected 'node NAME states s1,s2[,...]'");
    if (net.has_node(tok[1])) throw std::runtime_error("duplicate node: " + tok[1]);
    Node n;
    n.name = tok[1];
    n.states = split_states(tok[3]);
    if (n.states.size() < 2)
      throw std::runtime_error("node " + n.name + " needs at least two states");
    for (std::size_t i = 0; i < n.states.size(); ++i)
      for (std::size_t j = i + 1; j < n.states.size(); ++j)
        if (n.states[i] == n.states[j])
          throw std::runtime_error("node " + n.name + ": duplicate state " + n.states[i]);
    net.nodes.push_back(std::move(n));
  }

  for (const Statement& st : stmts) {
    const std::vector<std::string>& tok = st.tokens;
    if (tok[0] != "parent") continue;
    if (tok.size() != 3)
      throw std::runtime_error("line " + std::to_string(st.lineno) +
                               ": expected 'parent NAME PARENT'");
    if (!net.has_node(tok[1])) throw std::runtime_error("unknown node: " + tok[1]);
    if (!net.has_node(tok[2])) throw std::runtime_error("unknown parent: " + tok[2]);
    Node& child = net.nodes[net.index_of(tok[1])];
    if (!child.parent.empty())
      throw std::runtime_error("tree restriction violated: node " + child.name +
                               " has two parents");
    child.parent = tok[2];
  }

  // Attach CPT rows to the node named by the preceding "cpt" statement.
  std::ptrdiff_t current = -1;
  std::vector<std::vector<std::pair<std::string, std::vector<double>>>> rows(net.nodes.size());
  for (const Statement& st : stmts) {
    const std::vector<std::string>& tok = st.tokens;
    if (tok[0] == "node" || tok[0] == "parent") {
      current = -1;
      continue;
    }
    if (tok[0] == "cpt") {
      if (tok.size() != 2)
        throw std::runtime_error("line " + std::to_string(st.lineno) + ": expected 'cpt NAME'");
      current = static_cast<std::ptrdiff_t>(net.index_of(tok[1]));
      continue;
    }
    if (tok[0] == "given") {
      if (current < 0)
        throw std::runtime_error("line " + std::to_string(st.lineno) +
                                 ": 'given' outside a cpt block");
      if (tok.size() != 4 || tok[2] != ":")
        throw std::runtime_error("line " + std::to_string(st.lineno) +
                                 ": expected 'given PARENT_STATE : p1,p2[,...]'");
      std::vector<double> p;
      for (const std::string& v : split_states(tok[3])) p.push_back(to_double(v));
      rows[static_cast<std::size_t>(current)].push_back({tok[1], std::move(p)});
      continue;
    }
    throw std::runtime_error("line " + std::to_string(st.lineno) + ": unknown statement: " +
                             tok[0]);
  }

  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    Node& n = net.nodes[i];
    const auto& rs = rows[i];
    if (rs.empty()) throw std::runtime_error("missing cpt for node " + n.name);
    std::vector<std::string> expected;
    if (n.parent.empty())
      expected = {"-"};
    else
      expected = net.nodes[net.index_of(n.parent)].states;
    n.cpt.assign(expected.size(), {});
    std::vector<bool> seen(expected.size(), false);
    for (const auto& [pstate, p] : rs) {
      auto it = std::find(expected.begin(), expected.end(), pstate);
      if (it == expected.end())
        throw std::runtime_error("cpt for node " + n.name + ": unknown parent state " + pstate);
      std::size_t r = static_cast<std::size_t>(it - expected.begin());
      if (seen[r])
        throw std::runtime_error("cpt for node " + n.name + ": duplicate row for parent state " +
                                 pstate);
      seen[r] = true;
      if (p.size() != n.states.size())
        throw std::runtime_error("cpt for node " + n.name + ": expected " +
                                 std::to_string(n.states.size()) + " probabilities, got " +
                                 std::to_string(p.size()));
      double sum = 0.0;
      for (double v : p) {
        if (v < 0.0)
          throw std::runtime_error("cpt for node " + n.name + ": negative probability");
        sum += v;
      }
      if (std::fabs(sum - 1.0) > kRowSumTolerance)
        throw std::runtime_error("cpt for node " + n.name + ": row for parent state " + pstate +
                                 " sums to " + fmt_double(sum));
      n.cpt[r] = p;
    }
    for (std::size_t r = 0; r < expected.size(); ++r)
      if (!seen[r])
        throw std::runtime_error("cpt for node " + n.name + ": missing row for parent state " +
                                 expected[r]);
  }

  // Parent links have in-degree <= 1, so any cycle is a loop in the
  // walk-to-root chain.
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    std::size_t hops = 0, at = i;
    while (!net.nodes[at].parent.empty()) {
      at = net.index_of(net.nodes[at].parent);
      if (++hops > net.nodes.size()) throw std::runtime_error("cycle detected");
    }
  }
  return net;
}

Network load_network(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_network(ss.str());
}

namespace {

void validate_evidence(const Network& net, const Evidence& ev) {
  for (const auto& [name, state] : ev) {
    const Node& n = net.nodes[net.index_of(name)];
    n.state_index(state);
  }
}

std::vector<double> indicator(const Network& net, const Evidence& ev, std::size_t node) {
  const Node& n = net.nodes[node];
  std::vector<double> ind(n.states.size(), 1.0);
  auto it = ev.find(n.name);
  if (it != ev.end()) {
    std::fill(ind.begin(), ind.end(), 0.0);
    ind[n.state_index(it->second)] = 1.0;
  }
  return ind;
}

void normalize_or_die(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum <= 0.0) throw std::runtime_error("impossible evidence");
  for (double& x : v) x /= sum;
}

struct Propagator {
  const Network& net;
  const Evidence& ev;
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::vector<double>> lambda;      // per node
  std::vector<std::vector<double>> lambda_msg;  // from node to its parent, normalized
  std::vector<std::vector<double>> pi;          // per node
  std::vector<std::vector<double>> bel;

  explicit Propagator(const Network& n, const Evidence& e) : net(n), ev(e) {
    children.resize(net.nodes.size());
    lambda.resize(net.nodes.size());
    lambda_msg.resize(net.nodes.size());
    pi.resize(net.nodes.size());
    bel.resize(net.nodes.size());
    for (std::size_t i = 0; i < net.nodes.size(); ++i)
      if (!net.nodes[i].parent.empty())
        children[net.index_of(net.nodes[i].parent)].push_back(i);
  }

  // Bottom-up: lambda(x) = indicator * product of child messages;
  // message to the parent: lambda_msg(u) = sum_x P(x|u) lambda(x).
  void pass_up(std::size_t x) {
    const Node& n = net.nodes[x];
    lambda[x] = indicator(net, ev, x);
    for (std::size_t c : children[x]) {
      pass_up(c);
      for (std::size_t u = 0; u < n.states.size(); ++u) lambda[x][u] *= lambda_msg[c][u];
    }
    if (!n.parent.empty()) {
      const Node& p = net.nodes[net.index_of(n.parent)];
      std::vector<double> msg(p.states.size(), 0.0);
      for (std::size_t u = 0; u < p.states.size(); ++u)
        for (std::size_t s = 0; s < n.states.size(); ++s) msg[u] += n.cpt[u][s] * lambda[x][s];
      normalize_or_die(msg);
      lambda_msg[x] = std::move(msg);
    }
  }

  // Top-down: pi(root) = prior; the message to child j excludes j's own
  // lambda contribution; pi_child(x) = sum_u P(x|u) pi_msg(u).
  void pass_down(std::size_t x) {
    const Node& n = net.nodes[x];
    for (std::size_t c : children[x]) {
      std::vector<double> msg = indicator(net, ev, x);
      for (std::size_t u = 0; u < n.states.size(); ++u) msg[u] *= pi[x][u];
      for (std::size_t k : children[x]) {
        if (k == c) continue;
        for (std::size_t u = 0; u < n.states.size(); ++u) msg[u] *= lambda_msg[k][u];
      }
      normalize_or_die(msg);
      const Node& cn = net.nodes[c];
      pi[c].assign(cn.states.size(), 0.0);
      for (std::size_t s = 0; s < cn.states.size(); ++s)
        for (std::size_t u = 0; u < n.states.size(); ++u) pi[c][s] += cn.cpt[u][s] * msg[u];
      pass_down(c);
    }
  }

  BeliefState run() {
    BeliefState out;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      if (!net.nodes[i].parent.empty()) continue;
      pass_up(i);
      pi[i] = net.nodes[i].cpt[0];
      pass_down(i);
    }
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      bel[i].resize(net.nodes[i].states.size());
      for (std::size_t s = 0; s < bel[i].size(); ++s) bel[i][s] = lambda[i][s] * pi[i][s];
      normalize_or_die(bel[i]);
      out.beliefs[net.nodes[i].name] = bel[i];
    }
    return out;
  }
};

}  // namespace

BeliefState propagate(const Network& net, const Evidence& ev) {
  validate_evidence(net, ev);
  Propagator p(net, ev);
  return p.run();
}

BeliefState enumerate_joint(const Network& net, const Evidence& ev) {
  validate_evidence(net, ev);
  const std::size_t n = net.nodes.size();
  if (n == 0) return {};
  double space = 1.0;
  for (const Node& node : net.nodes) {
    space *= static_cast<double>(node.states.size());
    if (space > 1e6) throw std::runtime_error("state space too large");
  }
  std::vector<std::size_t> parent_of(n, static_cast<std::size_t>(-1));
  std::vector<std::ptrdiff_t> clamp(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!net.nodes[i].parent.empty()) parent_of[i] = net.index_of(net.nodes[i].parent);
    auto it = ev.find(net.nodes[i].name);
    if (it != ev.end()) clamp[i] = static_cast<std::ptrdiff_t>(net.nodes[i].state_index(it->second));
  }

  std::vector<std::size_t> conf(n, 0);
  std::vector<std::vector<double>> mass(n);
  for (std::size_t i = 0; i < n; ++i) mass[i].assign(net.nodes[i].states.size(), 0.0);
  double total = 0.0;
  bool done = false;
  while (!done) {
    bool consistent = true;
    for (std::size_t i = 0; i < n && consistent; ++i)
      if (clamp[i] >= 0 && conf[i] != static_cast<std::size_t>(clamp[i])) consistent = false;
    if (consistent) {
      double p = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t row = parent_of[i] == static_cast<std::size_t>(-1) ? 0 : conf[parent_of[i]];
        p *= net.nodes[i].cpt[row][conf[i]];
      }
      total += p;
      for (std::size_t i = 0; i < n; ++i) mass[i][conf[i]] += p;
    }
    std::size_t d = 0;
    for (; d < n; ++d) {
      if (++conf[d] < net.nodes[d].states.size()) break;
      conf[d] = 0;
    }
    done = d == n;
  }
  if (total <= 0.0) throw std::runtime_error("impossible evidence");
  BeliefState out;
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : mass[i]) v /= total;
    out.beliefs[net.nodes[i].name] = mass[i];
  }
  return out;
}

}  // namespace mlkit::bbn
