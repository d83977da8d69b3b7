#pragma once

// Graphviz rendering of LD-trees, optionally annotated with a pruning.

#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "cutcheck/ld_tree.hpp"
#include "cutcheck/pruning.hpp"
#include "cutcheck/term.hpp"

namespace cutcheck {

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string node_label(const LdNode& n) { return n.query.empty() ? "□" : to_string(n.query); }

}  // namespace detail

/// Nodes in id order, then edges in id order. With a pruning, removed nodes
/// are dashed and name the executing node that removed them; edges on the
/// cutting sequence of a kept executing node are bold.
inline std::string to_dot(const LdTree& t, const PrunedTree* pruned = nullptr) {
  std::set<std::pair<NodeId, NodeId>> bold;
  std::set<NodeId> on_path;
  if (pruned) {
    for (NodeId id : pruned->kept_ids()) {
      if (!t.node(id).is_executing()) continue;
      auto cs = cutting_sequence_of(t, id);
      for (std::size_t i = 0; i + 1 < cs.path.size(); ++i) bold.insert({cs.path[i], cs.path[i + 1]});
      on_path.insert(cs.path.begin(), cs.path.end());
    }
  }
  bool truncated = false;
  std::ostringstream os;
  os << "digraph ld {\n";
  os << "  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& n : t.nodes()) {
    std::string attrs = "label=\"" + detail::dot_escape(detail::node_label(n)) + "\"";
    if (n.status == NodeStatus::Success) attrs += ", peripheries=2";
    if (n.status == NodeStatus::Truncated) {
      attrs += ", shape=doubleoctagon";
      truncated = true;
    }
    if (pruned) {
      auto it = pruned->pruned_by.find(n.id);
      if (it != pruned->pruned_by.end())
        attrs += ", style=dashed, xlabel=\"pruned by n" + std::to_string(it->second) + "\"";
      else if (!pruned->kept[n.id])
        attrs += ", style=dotted";
      else if (on_path.count(n.id))
        attrs += ", style=bold";
    }
    os << "  n" << n.id << " [" << attrs << "];\n";
  }
  for (const auto& n : t.nodes()) {
    if (!n.parent) continue;
    std::string label = n.step && n.step->clause_index ? "c" + std::to_string(*n.step->clause_index + 1) : "!";
    std::string attrs = "label=\"" + label + "\"";
    if (bold.count({*n.parent, n.id})) attrs += ", style=bold";
    os << "  n" << *n.parent << " -> n" << n.id << " [" << attrs << "];\n";
  }
  if (truncated) os << "  legend [shape=plaintext, label=\"doubleoctagon: truncated by the search budget\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace cutcheck
