#pragma once

// Cutting sequences and pruned LD-trees.
//
// A node whose query starts with ! is an executing node. Its cutting sequence
// runs from the node that introduced that particular ! occurrence (or from
// the root, for a cut of the initial query) down to the executing node; the
// nodes pruned are the right siblings of every path step and their subtrees.
// The pruned tree is obtained by processing executing nodes one at a time in
// preorder of the current subgraph until no unprocessed one remains.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cutcheck/ld_tree.hpp"

namespace cutcheck {

struct CuttingSequence {
  std::optional<NodeId> introducing;  // absent when the cut comes from the initial query
  std::vector<NodeId> path;           // introducing (or root) ... executing
  NodeId executing = 0;
  std::size_t cut_occurrence = 0;  // position of the ! in the first query after the introducing node
};

class MalformedTreeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Recovers the cutting sequence of an executing node from the per-atom cut
/// provenance recorded while building the tree. When `kept` is given every
/// node of the sequence must be in it.
inline CuttingSequence cutting_sequence_of(const LdTree& t, NodeId executing, const std::vector<bool>* kept = nullptr) {
  const LdNode& n = t.node(executing);
  if (!n.is_executing()) throw std::invalid_argument("cutting_sequence_of: node does not start with !");
  const auto& origin = n.origins.front();
  if (!origin) throw MalformedTreeError("cut occurrence without provenance");
  CuttingSequence cs;
  cs.introducing = origin->introducer;
  cs.executing = executing;
  cs.cut_occurrence = origin->position;
  NodeId top = origin->introducer.value_or(0);
  if (!t.is_ancestor(top, executing)) throw MalformedTreeError("introducing node is not an ancestor");
  cs.path = t.path(top, executing);
  if (kept)
    for (NodeId id : cs.path)
      if (!(*kept)[id]) throw MalformedTreeError("cutting sequence leaves the subgraph");
  return cs;
}

namespace detail {
inline void collect_subtree(const LdTree& t, NodeId id, std::vector<NodeId>& out) {
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    const auto& ch = t.node(cur).children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
}
}  // namespace detail

/// Children of each path node strictly to the right of the path successor,
/// together with all their descendants.
inline std::set<NodeId> pruned_by_sequence(const LdTree& t, const CuttingSequence& cs) {
  std::set<NodeId> out;
  std::vector<NodeId> buf;
  for (std::size_t i = 0; i + 1 < cs.path.size(); ++i) {
    const auto& ch = t.node(cs.path[i]).children;
    bool right = false;
    for (NodeId c : ch) {
      if (right) {
        buf.clear();
        detail::collect_subtree(t, c, buf);
        out.insert(buf.begin(), buf.end());
      }
      if (c == cs.path[i + 1]) right = true;
    }
    if (!right) throw MalformedTreeError("cutting sequence is not a parent chain");
  }
  return out;
}

struct PruneStep {
  NodeId executing;
  std::vector<NodeId> removed;  // nodes still present before this step, ascending
};

struct PrunedTree {
  const LdTree* base = nullptr;
  std::vector<bool> kept;             // nodes of pruned(T)
  std::map<NodeId, NodeId> pruned_by;  // removed node -> executing node that removed it
  bool exact = true;
  std::vector<PruneStep> iteration_log;

  bool contains(NodeId id) const { return kept.at(id); }
  std::vector<NodeId> kept_ids() const {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < kept.size(); ++i)
      if (kept[i]) out.push_back(i);
    return out;
  }
};

/// pruned(T), computed as the T_0, T_1, ... iteration. `initial` restricts the
/// starting subgraph (used to re-prune an already pruned tree).
inline PrunedTree prune(const LdTree& t, const std::vector<bool>* initial = nullptr) {
  PrunedTree pt;
  pt.base = &t;
  std::vector<bool> present = initial ? *initial : std::vector<bool>(t.size(), true);
  auto is_present = [&](NodeId id) { return static_cast<bool>(present[id]); };

  std::size_t processed = 0;
  for (;;) {
    Preorder seq = preorder(t, is_present);
    std::size_t seen = 0;
    std::optional<NodeId> next;
    for (NodeId id : seq.ids) {
      if (!t.node(id).is_executing()) continue;
      if (seen == processed) {
        next = id;
        break;
      }
      ++seen;
    }
    if (!next) break;
    ++processed;
    CuttingSequence cs = cutting_sequence_of(t, *next, &present);
    PruneStep step{*next, {}};
    for (NodeId r : pruned_by_sequence(t, cs)) {
      if (!present[r]) continue;
      present[r] = false;
      pt.pruned_by.emplace(r, *next);
      step.removed.push_back(r);
    }
    pt.iteration_log.push_back(std::move(step));
  }

  Preorder final_seq = preorder(t, is_present);
  pt.kept.assign(t.size(), false);
  for (NodeId id : final_seq.ids) pt.kept[id] = true;
  // Truncated nodes that survive pruning leave the result undetermined; ones
  // removed by a preceding cut do not matter.
  pt.exact = final_seq.exact;
  return pt;
}

/// Success leaves of the pruned tree in preorder, as answers.
inline std::vector<Query> answers_of_pruned(const PrunedTree& pt) {
  std::vector<Query> out;
  const LdTree& t = *pt.base;
  for (NodeId id : preorder(t, [&](NodeId n) { return static_cast<bool>(pt.kept[n]); }).ids)
    if (t.node(id).status == NodeStatus::Success) out.push_back(t.node(id).instance);
  return out;
}

}  // namespace cutcheck
