#pragma once

// LD-resolution: derivation steps (including cut consumption), LD-trees,
// preorder traversal and subderivations.

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cutcheck/term.hpp"

namespace cutcheck {

using NodeId = std::size_t;

struct LdStep {
  Substitution mgu;
  std::optional<std::size_t> clause_index;  // absent for the cut-consumption step
  std::optional<Clause> variant;            // the standardized-apart clause used

  bool is_cut_step() const { return !clause_index.has_value(); }
};

struct Derivation {
  std::vector<Query> queries;
  std::vector<LdStep> steps;  // steps[i] leads from queries[i] to queries[i+1]
};

struct Budget {
  std::size_t nodes = 50'000;   // global node limit per tree
  std::size_t steps = 200'000;  // per-branch derivation length limit
};

enum class NodeStatus { Open, Success, Failure, Truncated };

/// Where a cut occurrence of a node's query came from: the node whose clause
/// application introduced it (absent for cuts of the initial query), and its
/// position in that node's child.
struct CutOrigin {
  std::optional<NodeId> introducer;
  std::size_t position = 0;
  friend bool operator==(const CutOrigin&, const CutOrigin&) = default;
};

struct LdNode {
  NodeId id = 0;
  Query query;
  std::optional<NodeId> parent;
  std::optional<LdStep> step;
  std::vector<NodeId> children;
  NodeStatus status = NodeStatus::Open;
  std::vector<std::optional<CutOrigin>> origins;  // parallel to query; set for cut atoms
  Query instance;                                 // root query under the composed mgus
  std::size_t depth = 0;

  bool is_executing() const { return !query.empty() && query.front().is_cut(); }
};

class LdTree {
 public:
  const LdNode& node(NodeId id) const { return nodes_.at(id); }
  const LdNode& root() const { return nodes_.front(); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<LdNode>& nodes() const { return nodes_; }

  /// No node was cut off by the budget.
  bool exact() const {
    for (const auto& n : nodes_)
      if (n.status == NodeStatus::Truncated) return false;
    return true;
  }

  bool is_ancestor(NodeId anc, NodeId n) const {
    std::optional<NodeId> cur = n;
    while (cur) {
      if (*cur == anc) return true;
      cur = nodes_[*cur].parent;
    }
    return false;
  }

  /// Parent chain from `from` (an ancestor) down to `to`, inclusive.
  std::vector<NodeId> path(NodeId from, NodeId to) const {
    std::vector<NodeId> rev;
    std::optional<NodeId> cur = to;
    while (cur && *cur != from) {
      rev.push_back(*cur);
      cur = nodes_[*cur].parent;
    }
    if (!cur) throw std::invalid_argument("path: not an ancestor");
    rev.push_back(from);
    return {rev.rbegin(), rev.rend()};
  }

 private:
  friend class TreeBuilder;
  std::vector<LdNode> nodes_;
};

struct Expansion {
  Query query;
  LdStep step;
  std::size_t body_size = 0;  // leading atoms that came from the clause body
};

/// One LD step from `q`: a single epsilon-step when q starts with cut, else one
/// child per applicable clause, in program order.
inline std::vector<Expansion> ld_expand(const Program& program, const Query& q, Renamer& renamer) {
  if (q.empty()) throw std::invalid_argument("ld_expand: empty query");
  std::vector<Expansion> out;
  if (q.front().is_cut()) {
    out.push_back({Query(q.begin() + 1, q.end()), LdStep{{}, std::nullopt, std::nullopt}, 0});
    return out;
  }
  const Atom& selected = q.front();
  for (std::size_t i = 0; i < program.clauses.size(); ++i) {
    const Clause& c = program.clauses[i];
    if (c.head.predicate() != selected.predicate() || c.head.arity() != selected.arity()) continue;
    Clause variant = renamer.rename_apart(c);
    auto mgu = unify(selected, variant.head);
    if (!mgu) continue;
    Query next = mgu->apply(variant.body);
    for (std::size_t k = 1; k < q.size(); ++k) next.push_back(mgu->apply(q[k]));
    std::size_t body_size = variant.body.size();
    out.push_back({std::move(next), LdStep{std::move(*mgu), i, std::move(variant)}, body_size});
  }
  return out;
}

class TreeBuilder {
 public:
  TreeBuilder(const Program& program, Budget budget) : program_(program), budget_(budget) {}

  LdTree build(const Query& root) {
    if (budget_.nodes < 1) throw std::invalid_argument("budget.nodes must be >= 1");
    LdTree t;
    Renamer renamer(var_set(root));
    LdNode r;
    r.id = 0;
    r.query = root;
    r.instance = root;
    r.origins.resize(root.size());
    for (std::size_t i = 0; i < root.size(); ++i)
      if (root[i].is_cut()) r.origins[i] = CutOrigin{std::nullopt, i};
    t.nodes_.push_back(std::move(r));

    std::deque<NodeId> queue{0};
    while (!queue.empty()) {
      NodeId id = queue.front();
      queue.pop_front();
      LdNode& n = t.nodes_[id];
      if (n.query.empty()) {
        n.status = NodeStatus::Success;
        continue;
      }
      if (n.depth >= budget_.steps || t.nodes_.size() >= budget_.nodes) {
        n.status = NodeStatus::Truncated;
        continue;
      }
      auto kids = ld_expand(program_, n.query, renamer);
      if (kids.empty()) {
        t.nodes_[id].status = NodeStatus::Failure;
        continue;
      }
      if (t.nodes_.size() + kids.size() > budget_.nodes) {
        t.nodes_[id].status = NodeStatus::Truncated;
        continue;
      }
      t.nodes_[id].status = NodeStatus::Open;
      for (auto& k : kids) {
        const LdNode& parent = t.nodes_[id];
        LdNode c;
        c.id = t.nodes_.size();
        c.parent = id;
        c.depth = parent.depth + 1;
        c.origins.resize(k.query.size());
        for (std::size_t i = 0; i < k.body_size; ++i)
          if (k.query[i].is_cut()) c.origins[i] = CutOrigin{id, i};
        for (std::size_t i = k.body_size; i < k.query.size(); ++i) c.origins[i] = parent.origins[i - k.body_size + 1];
        c.instance = k.step.mgu.apply(parent.instance);
        c.query = std::move(k.query);
        c.step = std::move(k.step);
        t.nodes_[id].children.push_back(c.id);
        queue.push_back(c.id);
        t.nodes_.push_back(std::move(c));
      }
    }
    return t;
  }

 private:
  const Program& program_;
  Budget budget_;
};

/// The LD-tree for `program` and `q`, expanded breadth-first until every leaf
/// is a success or failure, or the budget marks the rest Truncated.
inline LdTree build_tree(const Program& program, const Query& q, Budget budget = {}) {
  return TreeBuilder(program, budget).build(q);
}

struct Preorder {
  std::vector<NodeId> ids;
  bool exact = true;  // false when the walk stopped at a Truncated node
};

/// seq(T) restricted to nodes satisfying `kept` (all nodes if empty). A
/// Truncated node stands in for an infinite subtree: it is listed, and the
/// walk stops there.
inline Preorder preorder(const LdTree& t, const std::function<bool(NodeId)>& kept = {}) {
  Preorder out;
  std::vector<NodeId> stack{0};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    out.ids.push_back(id);
    const LdNode& n = t.node(id);
    if (n.status == NodeStatus::Truncated) {
      out.exact = false;
      break;
    }
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
      if (!kept || kept(*it)) stack.push_back(*it);
  }
  return out;
}

/// Answers of the tree: the root instance at each success leaf, in preorder.
inline std::vector<Query> answers(const LdTree& t) {
  std::vector<Query> out;
  for (NodeId id : preorder(t).ids)
    if (t.node(id).status == NodeStatus::Success) out.push_back(t.node(id).instance);
  return out;
}

/// The branch from the root to `leaf`, read as a derivation.
inline Derivation branch(const LdTree& t, NodeId leaf) {
  Derivation d;
  for (NodeId id : t.path(0, leaf)) {
    const LdNode& n = t.node(id);
    d.queries.push_back(n.query);
    if (n.step) d.steps.push_back(*n.step);
  }
  return d;
}

struct Subderivation {
  Derivation derivation;
  bool succeeded = false;
  std::optional<Query> answer;
  std::size_t start = 0;  // index j in the enclosing derivation
  std::size_t end = 0;    // index m (last query of the subderivation)
};

/// Splits Q_j = (B, A) with |B| = prefix_len and returns the subderivation
/// for B. B succeeds at the first Q_m (m >= j) that consists of the suffix
/// A alone under the intervening mgus.
inline Subderivation subderivation(const Derivation& d, std::size_t j, std::size_t prefix_len) {
  if (j >= d.queries.size()) throw std::out_of_range("subderivation: query index out of range");
  const Query& qj = d.queries[j];
  if (prefix_len > qj.size()) throw std::out_of_range("subderivation: prefix longer than query");
  std::size_t suffix_len = qj.size() - prefix_len;
  Query suffix(qj.begin() + static_cast<std::ptrdiff_t>(prefix_len), qj.end());
  Query prefix(qj.begin(), qj.begin() + static_cast<std::ptrdiff_t>(prefix_len));

  Subderivation s;
  s.start = j;
  std::optional<std::size_t> m;
  for (std::size_t i = j; i < d.queries.size(); ++i) {
    if (i > j) {
      suffix = d.steps[i - 1].mgu.apply(suffix);
      prefix = d.steps[i - 1].mgu.apply(prefix);
    }
    if (d.queries[i].size() == suffix_len) {
      if (d.queries[i] != suffix) throw std::logic_error("subderivation: derivation is not an LD-derivation");
      m = i;
      break;
    }
  }
  std::size_t last = m ? *m : d.queries.size() - 1;
  for (std::size_t i = j; i <= last; ++i) {
    s.derivation.queries.push_back(d.queries[i]);
    if (i > j) s.derivation.steps.push_back(d.steps[i - 1]);
  }
  s.end = last;
  s.succeeded = m.has_value();
  if (s.succeeded) s.answer = prefix;
  return s;
}

}  // namespace cutcheck
