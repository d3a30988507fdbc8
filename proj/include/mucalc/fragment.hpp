#pragma once

#include "mucalc/formula.hpp"

namespace mucalc {

// Syntax tree of a formula plus one back edge from every bound-variable
// occurrence to its binder.  Node 0 is the root; nodes are numbered in
// pre-order so tree structure and addresses stay aligned.
struct FormulaGraph {
  struct Node {
    Kind kind;
    std::string name;       // variable / action, as in Formula
    OccAddress address;     // path from the root
    int parent = -1;
    std::vector<int> children;
    int back_edge = -1;     // bound-variable occurrence -> binder node
  };
  Formula formula;
  std::vector<Node> nodes;

  int node_at(const OccAddress& occ) const;  // throws on a bad address
};

FormulaGraph build_graph(const Formula& f);

enum class OccurrenceClass { NotBad, Boxed, VeryBad };

const char* to_string(OccurrenceClass c);

// Bad: some root-to-occurrence path (back edges allowed) crosses a box node.
// Boxed: the unique simple path crosses a box.  VeryBad: bad but not boxed.
OccurrenceClass classify_occurrence(const FormulaGraph& g, const OccAddress& occ,
                                    const std::string& x);

// Fragment membership.  X variables bound in the formula are rejected.
bool in_C(const Formula& f, const std::set<std::string>& X);
bool in_C0(const Formula& f, const std::set<std::string>& X);

// No occurrence of an X variable is very-bad.
bool is_almost_good(const Formula& f, const std::set<std::string>& X);

}  // namespace mucalc
