#include "solvers.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sofmdim/errors.hpp"

namespace sofmdim::detail {

std::vector<std::vector<std::size_t>> components(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> out;
  Bits unseen(n);
  unseen.fill();
  for (std::size_t root = unseen.first(); root < n; root = unseen.first()) {
    std::vector<std::size_t> comp;
    Bits frontier(n);
    frontier.set(root);
    unseen.reset(root);
    while (frontier.any()) {
      Bits next(n);
      frontier.for_each([&](std::size_t v) {
        comp.push_back(v);
        next |= g.adj[v];
      });
      next &= unseen;
      unseen.and_not(next);
      frontier = std::move(next);
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

Graph induced(const Graph& g, const std::vector<std::size_t>& vertices) {
  Graph h(vertices.size());
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      if (g.adj[vertices[a]].test(vertices[b])) h.connect(a, b);
  return h;
}

std::vector<std::size_t> greedy_independent_set(const Graph& g) {
  const std::size_t n = g.size();
  Bits alive(n);
  alive.fill();
  std::vector<std::size_t> chosen;
  while (alive.any()) {
    std::size_t best = n;
    std::size_t best_deg = n + 1;
    alive.for_each([&](std::size_t v) {
      const std::size_t deg = g.adj[v].count_and(alive);
      if (deg < best_deg) {
        best_deg = deg;
        best = v;
      }
    });
    chosen.push_back(best);
    alive.reset(best);
    alive.and_not(g.adj[best]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

namespace {

void check_size(std::size_t n, const SearchLimits& limits, const char* what) {
  if (n > limits.max_vertices) {
    throw GuardExceeded(std::string(what) + ": component of " + std::to_string(n) +
                        " points exceeds exact limit " + std::to_string(limits.max_vertices));
  }
}

// Maximum clique with greedy-colouring bounds over a renumbered graph whose
// bit order is the branching order.
class CliqueSearch {
 public:
  CliqueSearch(std::vector<Bits> adj, std::uint64_t budget) : adj_(std::move(adj)), budget_(budget) {}

  std::vector<std::size_t> run(std::vector<std::size_t> initial) {
    best_ = std::move(initial);
    Bits all(adj_.size());
    all.fill();
    std::vector<std::size_t> cur;
    expand(all, cur);
    return best_;
  }

 private:
  void expand(Bits candidates, std::vector<std::size_t>& cur) {
    if (++nodes_ > budget_) {
      throw GuardExceeded("independent set search exceeded node budget of " +
                          std::to_string(budget_));
    }
    std::vector<std::size_t> order;
    std::vector<std::size_t> colour;
    Bits uncoloured = candidates;
    std::size_t k = 0;
    while (uncoloured.any()) {
      ++k;
      Bits q = uncoloured;
      while (q.any()) {
        const std::size_t v = q.first();
        q.reset(v);
        q.and_not(adj_[v]);
        uncoloured.reset(v);
        order.push_back(v);
        colour.push_back(k);
      }
    }
    for (std::size_t i = order.size(); i-- > 0;) {
      if (cur.size() + colour[i] <= best_.size()) return;
      const std::size_t v = order[i];
      cur.push_back(v);
      Bits next = candidates & adj_[v];
      if (next.none()) {
        if (cur.size() > best_.size()) best_ = cur;
      } else {
        expand(std::move(next), cur);
      }
      cur.pop_back();
      candidates.reset(v);
    }
  }

  std::vector<Bits> adj_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::size_t> best_;
};

}  // namespace

std::vector<std::size_t> max_independent_set(const Graph& g, const SearchLimits& limits) {
  const std::size_t n = g.size();
  if (n == 0) return {};
  if (n == 1) return {0};
  check_size(n, limits, "separated_number");

  // Branch on low-conflict vertices first.
  std::vector<std::size_t> degree(n);
  for (std::size_t v = 0; v < n; ++v) degree[v] = g.adj[v].count();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return degree[a] < degree[b]; });
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;

  std::vector<Bits> comp(n, Bits(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !g.adj[order[i]].test(order[j])) comp[i].set(j);

  std::vector<std::size_t> initial;
  for (std::size_t v : greedy_independent_set(g)) initial.push_back(pos[v]);

  CliqueSearch search(std::move(comp), limits.node_budget);
  std::vector<std::size_t> best = search.run(std::move(initial));
  for (auto& v : best) v = order[v];
  std::sort(best.begin(), best.end());
  return best;
}

std::vector<std::size_t> greedy_set_cover(std::size_t universe, const std::vector<Bits>& sets) {
  Bits uncovered(universe);
  uncovered.fill();
  std::vector<std::size_t> chosen;
  while (uncovered.any()) {
    std::size_t best = sets.size();
    std::size_t gain = 0;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const std::size_t c = sets[s].count_and(uncovered);
      if (c > gain) {
        gain = c;
        best = s;
      }
    }
    if (best == sets.size()) throw InvalidArgument("set cover: universe element in no set");
    chosen.push_back(best);
    uncovered.and_not(sets[best]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

namespace {

class CoverSearch {
 public:
  CoverSearch(std::size_t universe, std::vector<Bits> sets, std::uint64_t budget)
      : u_(universe), sets_(std::move(sets)), budget_(budget) {
    const std::size_t k = sets_.size();
    cand_.assign(u_, Bits(k));
    for (std::size_t s = 0; s < k; ++s) sets_[s].for_each([&](std::size_t e) { cand_[e].set(s); });
    cand_count_.resize(u_);
    max_set_ = 0;
    for (std::size_t e = 0; e < u_; ++e) {
      cand_count_[e] = cand_[e].count();
      if (cand_count_[e] == 0) throw InvalidArgument("set cover: universe element in no set");
    }
    for (const auto& s : sets_) max_set_ = std::max(max_set_, s.count());
    packing_order_.resize(u_);
    std::iota(packing_order_.begin(), packing_order_.end(), 0);
    std::stable_sort(packing_order_.begin(), packing_order_.end(),
                     [&](std::size_t a, std::size_t b) { return cand_count_[a] < cand_count_[b]; });
  }

  std::vector<std::size_t> run(std::vector<std::size_t> initial) {
    best_ = std::move(initial);
    Bits uncovered(u_);
    uncovered.fill();
    std::vector<std::size_t> cur;
    solve(uncovered, cur);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  std::size_t lower_bound(const Bits& uncovered) const {
    // Elements with pairwise disjoint candidate lists need distinct sets.
    Bits used(sets_.size());
    std::size_t packing = 0;
    for (std::size_t e : packing_order_) {
      if (!uncovered.test(e) || cand_[e].intersects(used)) continue;
      ++packing;
      used |= cand_[e];
    }
    const std::size_t remaining = uncovered.count();
    const std::size_t volume = (remaining + max_set_ - 1) / max_set_;
    return std::max(packing, volume);
  }

  void solve(const Bits& uncovered, std::vector<std::size_t>& cur) {
    if (++nodes_ > budget_) {
      throw GuardExceeded("set cover search exceeded node budget of " + std::to_string(budget_));
    }
    if (uncovered.none()) {
      if (cur.size() < best_.size()) best_ = cur;
      return;
    }
    if (cur.size() + lower_bound(uncovered) >= best_.size()) return;

    std::size_t pivot = u_;
    std::size_t fewest = SIZE_MAX;
    uncovered.for_each([&](std::size_t e) {
      if (cand_count_[e] < fewest) {
        fewest = cand_count_[e];
        pivot = e;
      }
    });
    std::vector<std::pair<std::size_t, std::size_t>> options;  // (-gain, set)
    cand_[pivot].for_each([&](std::size_t s) {
      options.emplace_back(sets_[s].count_and(uncovered), s);
    });
    std::stable_sort(options.begin(), options.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [gain, s] : options) {
      cur.push_back(s);
      Bits next = uncovered;
      next.and_not(sets_[s]);
      solve(next, cur);
      cur.pop_back();
      if (cur.size() + 1 >= best_.size()) return;
    }
  }

  std::size_t u_;
  std::vector<Bits> sets_;
  std::vector<Bits> cand_;
  std::vector<std::size_t> cand_count_;
  std::vector<std::size_t> packing_order_;
  std::size_t max_set_ = 1;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::size_t> best_;
};

}  // namespace

std::vector<std::size_t> min_set_cover(std::size_t universe, const std::vector<Bits>& sets,
                                       const SearchLimits& limits) {
  if (universe == 0) return {};
  check_size(universe, limits, "set cover");

  // Drop duplicate and dominated sets; keep the lowest index among equals.
  std::vector<std::size_t> kept;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    if (sets[s].none()) continue;
    bool dominated = false;
    for (std::size_t t = 0; t < sets.size() && !dominated; ++t) {
      if (t == s || !sets[s].subset_of(sets[t])) continue;
      dominated = !(sets[t] == sets[s]) || t < s;
    }
    if (!dominated) kept.push_back(s);
  }
  std::vector<Bits> reduced;
  reduced.reserve(kept.size());
  for (std::size_t s : kept) reduced.push_back(sets[s]);

  std::vector<std::size_t> initial = greedy_set_cover(universe, reduced);
  CoverSearch search(universe, std::move(reduced), limits.node_budget);
  std::vector<std::size_t> best = search.run(std::move(initial));
  for (auto& s : best) s = kept[s];
  std::sort(best.begin(), best.end());
  return best;
}

namespace {

class CliqueEnumerator {
 public:
  CliqueEnumerator(const Graph& g, std::uint64_t budget) : g_(g), budget_(budget) {}

  std::vector<Bits> run() {
    const std::size_t n = g_.size();
    Bits r(n), p(n), x(n);
    p.fill();
    recurse(r, p, x);
    return std::move(out_);
  }

 private:
  void recurse(Bits& r, Bits p, Bits x) {
    if (++nodes_ > budget_) {
      throw GuardExceeded("maximal clique enumeration exceeded node budget of " +
                          std::to_string(budget_));
    }
    if (p.none()) {
      if (x.none()) out_.push_back(r);
      return;
    }
    Bits px = p;
    px |= x;
    std::size_t pivot = px.first();
    std::size_t best = 0;
    px.for_each([&](std::size_t u) {
      const std::size_t c = p.count_and(g_.adj[u]);
      if (c > best) {
        best = c;
        pivot = u;
      }
    });
    Bits branch = p;
    branch.and_not(g_.adj[pivot]);
    branch.for_each([&](std::size_t v) {
      r.set(v);
      recurse(r, p & g_.adj[v], x & g_.adj[v]);
      r.reset(v);
      p.reset(v);
      x.set(v);
    });
  }

  const Graph& g_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<Bits> out_;
};

}  // namespace

std::vector<Bits> maximal_cliques(const Graph& g, std::uint64_t node_budget) {
  if (g.size() == 0) return {};
  return CliqueEnumerator(g, node_budget).run();
}

}  // namespace sofmdim::detail
