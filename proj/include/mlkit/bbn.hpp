#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace mlkit::bbn {

struct Node {
  std::string name;
  std::vector<std::string> states;  // at least two
  std::string parent;               // empty for roots
  // cpt[r][s] = P(state s | parent state r); roots hold a single prior row.
  std::vector<std::vector<double>> cpt;
  std::size_t state_index(const std::string& state) const;  // throws on unknown state
};

struct Network {
  std::vector<Node> nodes;  // declaration order
  std::size_t index_of(const std::string& name) const;  // throws on unknown node
  bool has_node(const std::string& name) const;
};

// node name -> observed state label
using Evidence = std::map<std::string, std::string>;

struct BeliefState {
  // node name -> distribution over its states, in declaration order
  std::map<std::string, std::vector<double>> beliefs;
};

// Line-oriented format:
//   node NAME states s1,s2[,...]
//   parent NAME PARENT
//   cpt NAME
//   given PARENT_STATE : p1,p2[,...]   (roots use "given - : ...")
// '#' starts a comment. Parent links must form a forest; every CPT row must
// sum to 1 within 1e-9.
Network parse_network(const std::string& text);
Network load_network(const std::string& path);

// Exact posteriors by Pearl's message passing over the tree/forest: lambda
// messages up, pi messages down, beliefs normalize lambda*pi. Evidence nodes
// clamp lambda to an indicator. Zero total mass raises "impossible evidence".
BeliefState propagate(const Network& net, const Evidence& ev);

// Brute-force oracle: sums the full joint over every configuration consistent
// with the evidence. State space is capped at 1e6 configurations.
BeliefState enumerate_joint(const Network& net, const Evidence& ev);

}  // namespace mlkit::bbn
