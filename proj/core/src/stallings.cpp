#include "fnfm/stallings.hpp"

#include <algorithm>
#include <deque>
#include <utility>

namespace fnfm {

namespace {

// Mutable graph used during folding and construction.  Edge labels are
// positive; traversing an edge against its direction reads the inverse
// letter.  When expression tracking is on, each edge carries a word over an
// auxiliary alphabet whose base-loop products express subgroup elements in
// terms of the original generators.
struct WorkGraph {
  Alphabet alpha;
  bool track = false;
  Alphabet aux{0, 'h'};
  bool consistent = true;

  struct Edge {
    int from, to, label;  // label > 0
    FreeWord expr;
    bool alive = true;
  };
  std::vector<Edge> edges;
  int vertices = 0;

  int new_vertex() { return vertices++; }

  void add_edge(int from, int to, int label, FreeWord expr) {
    edges.push_back({from, to, label, std::move(expr), true});
  }

  // Folding state: vertices live in a union-find forest, and every live
  // representative carries a map from signed labels (as read when leaving
  // the vertex) to the edge occupying that slot.  An edge is either
  // resident in the maps of both its endpoints or queued for insertion,
  // never half way.  A resident edge has current representatives as
  // endpoints and an exact expression; queued edges carry endpoints and
  // expressions that were exact when last touched, and the gauge words
  // along the union-find chain (pot) accumulate the corrections owed
  // since, applied when the edge is popped.
  std::vector<int> parent;
  std::vector<FreeWord> pot;  // correction owed to the parent, track mode only
  std::vector<std::map<int, std::pair<size_t, bool>>> adj;  // slot -> (edge, forward)

  int find(int v) {
    int root = v;
    while (parent[root] != root) root = parent[root];
    if (track) {
      // Full compression, folding the gauge words top-down so that each
      // node ends up holding its correction relative to the root itself.
      std::vector<int> chain;
      for (int x = v; x != root; x = parent[x]) chain.push_back(x);
      FreeWord acc(aux);
      for (size_t i = chain.size(); i-- > 0;) {
        acc = acc * pot[chain[i]];
        pot[chain[i]] = acc;
        parent[chain[i]] = root;
      }
    } else {
      while (parent[v] != root) {
        int up = parent[v];
        parent[v] = parent[up];
        v = up;
      }
    }
    return root;
  }

  // The accumulated gauge from v down to its representative: expressions
  // read when leaving v are prefixed by it.  Identity for representatives.
  FreeWord gauge(int v) {
    int root = find(v);
    return v == root ? FreeWord(aux) : pot[v];
  }

  void fold_all() {
    parent.resize(vertices);
    for (int v = 0; v < vertices; ++v) parent[v] = v;
    if (track) pot.assign(vertices, FreeWord(aux));
    adj.assign(vertices, {});
    std::deque<size_t> pending;
    for (size_t i = 0; i < edges.size(); ++i)
      if (edges[i].alive) pending.push_back(i);

    auto materialize = [&](Edge& e) {
      if (track) e.expr = gauge(e.from) * e.expr * gauge(e.to).inverse();
      e.from = find(e.from);
      e.to = find(e.to);
    };

    auto detach = [&](size_t eid) {
      const Edge& e = edges[eid];
      auto drop_slot = [&](int v, int key) {
        auto it = adj[v].find(key);
        if (it != adj[v].end() && it->second.first == eid) adj[v].erase(it);
      };
      drop_slot(e.from, e.label);
      drop_slot(e.to, -e.label);
    };

    // Redirect `drop` into `keep`.  `corr` is the prefix owed to
    // expressions read when leaving drop, so base-loop products are
    // preserved; all of drop's edges go back to the queue and pick the
    // correction up on their way out.
    auto unite = [&](int keep, int drop, FreeWord corr) {
      if (keep == drop) return;
      if (find(0) == drop || adj[drop].size() > adj[keep].size()) {
        std::swap(keep, drop);
        if (track) corr = corr.inverse();
      }
      std::vector<size_t> moved;
      for (const auto& [key, slot] : adj[drop]) moved.push_back(slot.first);
      std::sort(moved.begin(), moved.end());
      moved.erase(std::unique(moved.begin(), moved.end()), moved.end());
      for (size_t eid : moved) {
        detach(eid);
        pending.push_back(eid);
      }
      adj[drop].clear();
      parent[drop] = keep;
      if (track) pot[drop] = std::move(corr);
    };

    while (!pending.empty()) {
      size_t ei = pending.front();
      pending.pop_front();
      Edge& e = edges[ei];
      if (!e.alive) continue;
      materialize(e);
      auto probe = [&](int v, int key, bool forward, int far) {
        auto it = adj[v].find(key);
        if (it == adj[v].end() || it->second.first == ei) return false;
        const Edge& f = edges[it->second.first];
        int far_f = it->second.second ? f.to : f.from;
        if (far_f == far) {
          if (track) {
            FreeWord mine = forward ? e.expr : e.expr.inverse();
            FreeWord theirs = it->second.second ? f.expr : f.expr.inverse();
            if (mine != theirs) consistent = false;
          }
          e.alive = false;
          return true;
        }
        FreeWord corr(aux);
        if (track) {
          FreeWord mine = forward ? e.expr : e.expr.inverse();
          FreeWord theirs = it->second.second ? f.expr : f.expr.inverse();
          corr = theirs.inverse() * mine;
        }
        unite(far_f, far, std::move(corr));
        pending.push_back(ei);
        return true;
      };
      if (probe(e.from, e.label, true, e.to)) continue;
      if (probe(e.to, -e.label, false, e.from)) continue;
      adj[e.from][e.label] = {ei, true};
      adj[e.to][-e.label] = {ei, false};
    }

    for (Edge& e : edges)
      if (e.alive) materialize(e);
  }

  // Remove degree-1 vertices other than the base by peeling leaves
  // inward (isolated non-base vertices simply never get compacted).
  void trim() {
    std::vector<long long> degree(vertices, 0);
    std::vector<std::vector<size_t>> incident(vertices);
    for (size_t i = 0; i < edges.size(); ++i) {
      if (!edges[i].alive) continue;
      ++degree[edges[i].from];
      ++degree[edges[i].to];
      incident[edges[i].from].push_back(i);
      incident[edges[i].to].push_back(i);
    }
    std::deque<int> leaves;
    for (int v = 1; v < vertices; ++v)
      if (degree[v] == 1) leaves.push_back(v);
    while (!leaves.empty()) {
      int v = leaves.front();
      leaves.pop_front();
      if (degree[v] != 1) continue;
      for (size_t i : incident[v]) {
        Edge& e = edges[i];
        if (!e.alive) continue;
        e.alive = false;
        --degree[e.from];
        --degree[e.to];
        int other = e.from == v ? e.to : e.from;
        if (other != 0 && degree[other] == 1) leaves.push_back(other);
      }
    }
  }
};

WorkGraph build_bouquet(Alphabet a, const std::vector<FreeWord>& generators, bool track) {
  WorkGraph g;
  g.alpha = a;
  g.track = track;
  g.aux = Alphabet{static_cast<int>(generators.size()), 'h'};
  g.new_vertex();  // base
  for (size_t t = 0; t < generators.size(); ++t) {
    const auto& ls = generators[t].letters();
    if (ls.empty()) continue;
    int prev = 0;
    for (size_t i = 0; i < ls.size(); ++i) {
      int next = i + 1 == ls.size() ? 0 : g.new_vertex();
      FreeWord expr(g.aux);
      if (track && i == 0) expr = FreeWord(g.aux, {static_cast<int>(t) + 1});
      int l = ls[i];
      if (l > 0)
        g.add_edge(prev, next, l, expr);
      else
        g.add_edge(next, prev, -l, track ? expr.inverse() : expr);
      prev = next;
    }
  }
  return g;
}

}  // namespace

class GraphBuilder {
 public:
  static SubgroupGraph compact(const WorkGraph& g) {
    SubgroupGraph out;
    out.alpha_ = g.alpha;
    std::vector<int> id(g.vertices, -1);
    // Keep the base plus everything incident to an alive edge, in BFS order
    // from the base for deterministic numbering.
    std::vector<std::vector<std::pair<int, int>>> nbr(g.vertices);
    for (const auto& e : g.edges)
      if (e.alive) {
        nbr[e.from].push_back({e.label, e.to});
        nbr[e.to].push_back({-e.label, e.from});
      }
    for (auto& v : nbr) std::sort(v.begin(), v.end());
    std::deque<int> queue{0};
    id[0] = 0;
    int next_id = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (auto [l, w] : nbr[v])
        if (id[w] < 0) {
          id[w] = next_id++;
          queue.push_back(w);
        }
    }
    out.adj_.resize(next_id);
    for (const auto& e : g.edges) {
      if (!e.alive || id[e.from] < 0 || id[e.to] < 0) continue;
      out.adj_[id[e.from]][e.label] = id[e.to];
      out.adj_[id[e.to]][-e.label] = id[e.from];
      ++out.edge_count_;
    }
    return out;
  }
};

SubgroupGraph SubgroupGraph::fold(Alphabet a, const std::vector<FreeWord>& generators) {
  for (const auto& w : generators)
    if (w.alphabet() != a) throw Error("fold: generator over the wrong alphabet");
  WorkGraph g = build_bouquet(a, generators, false);
  g.fold_all();
  g.trim();
  return GraphBuilder::compact(g);
}

bool SubgroupGraph::contains(const FreeWord& w) const {
  if (w.alphabet() != alpha_) throw Error("membership query over the wrong alphabet");
  int v = 0;
  for (int l : w.letters()) {
    auto it = adj_[v].find(l);
    if (it == adj_[v].end()) return false;
    v = it->second;
  }
  return v == 0;
}

long long SubgroupGraph::trace_prefix(const FreeWord& w) const {
  int v = 0;
  long long consumed = 0;
  for (int l : w.letters()) {
    auto it = adj_[v].find(l);
    if (it == adj_[v].end()) break;
    v = it->second;
    ++consumed;
  }
  return consumed;
}

long long SubgroupGraph::rank() const { return edge_count_ - vertex_count() + 1; }

std::vector<FreeWord> SubgroupGraph::basis() const {
  // BFS spanning tree; every non-tree edge contributes
  // path(from) . label . path(to)^-1.
  std::vector<std::vector<int>> path(vertex_count());
  std::vector<bool> seen(vertex_count(), false);
  std::vector<std::pair<std::pair<int, int>, int>> non_tree;  // ((from,label),to)
  seen[0] = true;
  std::deque<int> queue{0};
  std::vector<std::vector<bool>> edge_used(vertex_count());
  // Track tree edges as (vertex,label) pairs used for discovery.
  std::map<std::pair<int, int>, bool> is_tree;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (auto [l, w] : adj_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        path[w] = path[v];
        path[w].push_back(l);
        is_tree[{v, l}] = true;
        is_tree[{w, -l}] = true;
        queue.push_back(w);
      }
    }
  }
  std::vector<FreeWord> out;
  for (int v = 0; v < vertex_count(); ++v)
    for (auto [l, w] : adj_[v]) {
      if (l < 0 || is_tree.count({v, l})) continue;  // each edge once, skip tree
      std::vector<int> word = path[v];
      word.push_back(l);
      for (auto it = path[w].rbegin(); it != path[w].rend(); ++it) word.push_back(-*it);
      FreeWord b(alpha_, std::move(word));
      if (!b.empty()) out.push_back(std::move(b));
    }
  std::sort(out.begin(), out.end());
  return out;
}

SubgroupGraph SubgroupGraph::intersect(const SubgroupGraph& other) const {
  if (alpha_ != other.alpha_) throw Error("intersection across different alphabets");
  std::map<std::pair<int, int>, int> id;
  WorkGraph g;
  g.alpha = alpha_;
  auto get = [&](int v1, int v2) {
    auto it = id.find({v1, v2});
    if (it != id.end()) return it->second;
    int v = g.new_vertex();
    id[{v1, v2}] = v;
    return v;
  };
  std::deque<std::pair<int, int>> queue{{0, 0}};
  get(0, 0);
  std::vector<std::pair<int, int>> order{{0, 0}};
  std::map<std::pair<int, int>, bool> visited{{{0, 0}, true}};
  while (!queue.empty()) {
    auto [v1, v2] = queue.front();
    queue.pop_front();
    for (auto [l, w1] : adj_[v1]) {
      auto it = other.adj_[v2].find(l);
      if (it == other.adj_[v2].end()) continue;
      int w2 = it->second;
      if (!visited.count({w1, w2})) {
        visited[{w1, w2}] = true;
        get(w1, w2);
        queue.push_back({w1, w2});
      }
      if (l > 0) g.add_edge(id[{v1, v2}], id[{w1, w2}], l, FreeWord(g.aux));
    }
  }
  g.trim();
  return GraphBuilder::compact(g);
}

std::optional<std::vector<FreeWord>> express_standard_basis(
    Alphabet a, const std::vector<FreeWord>& generators) {
  for (const auto& w : generators)
    if (w.alphabet() != a) throw Error("express: generator over the wrong alphabet");
  WorkGraph g = build_bouquet(a, generators, true);
  g.fold_all();
  if (!g.consistent) return std::nullopt;
  g.trim();
  // The whole group folds to the bouquet: a single vertex carrying one loop
  // per generator.
  std::vector<FreeWord> exprs(a.rank, FreeWord(g.aux));
  std::vector<bool> found(a.rank, false);
  for (const auto& e : g.edges) {
    if (!e.alive) continue;
    if (e.from != 0 || e.to != 0) return std::nullopt;
    if (found[e.label - 1]) return std::nullopt;
    found[e.label - 1] = true;
    exprs[e.label - 1] = e.expr;
  }
  for (bool f : found)
    if (!f) return std::nullopt;
  return exprs;
}

bool WeightedAutomaton::accepts(const FreeWord& w) const {
  if (w.alphabet() != alpha) throw Error("automaton fed a word over the wrong alphabet");
  long long state = 0;
  for (int l : w.letters()) {
    long long r = residues[(l < 0 ? -l : l) - 1];
    state = ((state + (l > 0 ? r : -r)) % modulus + modulus) % modulus;
  }
  return state == 0;
}

WeightedAutomaton build_weighted(Alphabet a, std::span<const long long> weights,
                                 long long modulus) {
  if (modulus < 1) throw Error("weighted automaton needs a positive modulus");
  if (static_cast<int>(weights.size()) != a.rank)
    throw Error("weight vector size does not match rank");
  WeightedAutomaton wa;
  wa.alpha = a;
  wa.modulus = modulus;
  for (long long w : weights) wa.residues.push_back(((w % modulus) + modulus) % modulus);
  return wa;
}

SubgroupGraph subgroup_of_weighted(const WeightedAutomaton& wa) {
  static const long long kMaxStates = 1 << 20;
  if (wa.modulus > kMaxStates)
    throw ResourceLimit("residue automaton too large to materialize");
  // Reachable residues form a subgroup of Z_modulus; the restriction of the
  // full state graph to them is deterministic, complete and folded.
  std::vector<int> id(wa.modulus, -1);
  std::deque<long long> queue{0};
  id[0] = 0;
  int next_id = 1;
  WorkGraph g;
  g.alpha = wa.alpha;
  g.new_vertex();
  std::vector<long long> order{0};
  while (!queue.empty()) {
    long long s = queue.front();
    queue.pop_front();
    for (long long r : wa.residues)
      for (long long t : {(s + r) % wa.modulus, ((s - r) % wa.modulus + wa.modulus) % wa.modulus})
        if (id[t] < 0) {
          id[t] = g.new_vertex();
          order.push_back(t);
          queue.push_back(t);
        }
  }
  for (long long s : order)
    for (size_t j = 0; j < wa.residues.size(); ++j) {
      long long t = (s + wa.residues[j]) % wa.modulus;
      g.add_edge(id[s], id[t], static_cast<int>(j) + 1, FreeWord(g.aux));
    }
  return GraphBuilder::compact(g);
}

}  // namespace fnfm
