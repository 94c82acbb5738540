#include "sofmdim/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sofmdim/errors.hpp"
#include "solvers.hpp"

namespace sofmdim {

FinitePseudometricSpace::FinitePseudometricSpace() : labels_{0}, base_size_(1), base_{0.0} {}

FinitePseudometricSpace::FinitePseudometricSpace(const std::vector<std::vector<double>>& table) {
  const std::size_t n = table.size();
  if (n == 0) throw InvalidArgument("FinitePseudometricSpace: empty table");
  base_size_ = n;
  base_.reserve(n * n);
  for (const auto& row : table) {
    if (row.size() != n) throw InvalidArgument("FinitePseudometricSpace: table is not square");
    base_.insert(base_.end(), row.begin(), row.end());
  }
  labels_.resize(n);
  std::iota(labels_.begin(), labels_.end(), 0U);
}

FinitePseudometricSpace::FinitePseudometricSpace(std::vector<std::uint32_t> labels,
                                                 std::size_t base_size, std::vector<double> base)
    : labels_(std::move(labels)), base_size_(base_size), base_(std::move(base)) {
  if (labels_.empty()) throw InvalidArgument("FinitePseudometricSpace: no points");
  if (base_size_ == 0 || base_.size() != base_size_ * base_size_)
    throw InvalidArgument("FinitePseudometricSpace: base table has wrong size");
  for (auto l : labels_)
    if (l >= base_size_) throw InvalidArgument("FinitePseudometricSpace: label out of range");
}

FinitePseudometricSpace FinitePseudometricSpace::line(std::span<const double> coords) {
  std::vector<std::vector<double>> t(coords.size(), std::vector<double>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = 0; j < coords.size(); ++j) t[i][j] = std::fabs(coords[i] - coords[j]);
  return FinitePseudometricSpace(t);
}

FinitePseudometricSpace FinitePseudometricSpace::uniform(std::size_t n, double value) {
  std::vector<std::vector<double>> t(n, std::vector<double>(n, value));
  for (std::size_t i = 0; i < n; ++i) t[i][i] = 0.0;
  return FinitePseudometricSpace(t);
}

double FinitePseudometricSpace::diameter() const {
  // Only labels that actually occur matter.
  std::vector<bool> used(base_size_, false);
  for (auto l : labels_) used[l] = true;
  double d = 0.0;
  for (std::size_t a = 0; a < base_size_; ++a)
    for (std::size_t b = 0; b < base_size_; ++b)
      if (used[a] && used[b]) d = std::max(d, base_distance(a, b));
  return d;
}

std::vector<std::vector<double>> FinitePseudometricSpace::table() const {
  const std::size_t n = size();
  std::vector<std::vector<double>> t(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = (*this)(i, j);
  return t;
}

FinitePseudometricSpace FinitePseudometricSpace::materialize(const Pseudometric& metric) {
  const std::size_t n = metric.size();
  std::vector<std::vector<double>> t(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = metric(i, j);
  return FinitePseudometricSpace(t);
}

double diameter(const Pseudometric& metric) {
  double d = 0.0;
  for (std::size_t i = 0; i < metric.size(); ++i)
    for (std::size_t j = 0; j < metric.size(); ++j) d = std::max(d, metric(i, j));
  return d;
}

std::vector<std::string> validate_space(const FinitePseudometricSpace& space, double tolerance) {
  std::vector<std::string> out;
  // Axioms only depend on the base table entries that are used; checking
  // the base keeps huge pullback spaces cheap.
  const std::size_t k = space.base_size();
  std::vector<bool> used(k, false);
  for (std::size_t i = 0; i < space.size(); ++i) used[space.label(i)] = true;
  const bool identity_labels = k == space.size();
  auto name = [&](std::size_t a) {
    return identity_labels ? std::to_string(a) : "label " + std::to_string(a);
  };
  for (std::size_t a = 0; a < k; ++a) {
    if (!used[a]) continue;
    const double self = space.base_distance(a, a);
    if (self != 0.0) {
      std::ostringstream s;
      s << "diagonal violation at " << name(a) << ": dist = " << self;
      out.push_back(s.str());
    }
    for (std::size_t b = 0; b < k; ++b) {
      if (!used[b]) continue;
      const double ab = space.base_distance(a, b);
      if (!(ab >= 0.0) || !std::isfinite(ab)) {
        std::ostringstream s;
        s << "nonnegativity violation at (" << name(a) << "," << name(b) << "): dist = " << ab;
        out.push_back(s.str());
      }
      if (b > a && ab != space.base_distance(b, a)) {
        std::ostringstream s;
        s << "symmetry violation at (" << name(a) << "," << name(b) << "): " << ab
          << " != " << space.base_distance(b, a);
        out.push_back(s.str());
      }
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    if (!used[a]) continue;
    for (std::size_t b = 0; b < k; ++b) {
      if (!used[b]) continue;
      for (std::size_t c = 0; c < k; ++c) {
        if (!used[c]) continue;
        const double direct = space.base_distance(a, c);
        const double via = space.base_distance(a, b) + space.base_distance(b, c);
        if (direct > via + tolerance) {
          std::ostringstream s;
          s << "triangle violation at (" << name(a) << "," << name(b) << "," << name(c)
            << "): " << direct << " > " << via;
          out.push_back(s.str());
        }
      }
    }
  }
  return out;
}

const char* to_string(Exactness e) {
  switch (e) {
    case Exactness::exact: return "exact";
    case Exactness::lower_bound: return "lower_bound";
    case Exactness::upper_bound: return "upper_bound";
  }
  return "?";
}

const char* to_string(SolveMode m) { return m == SolveMode::exact ? "exact" : "greedy"; }

namespace {

using detail::Bits;
using detail::Graph;

void check_eps(double eps, const char* what) {
  if (!(eps > 0.0)) throw InvalidArgument(std::string(what) + ": eps must be positive");
}

std::vector<std::size_t> all_points(const Pseudometric& metric) {
  std::vector<std::size_t> v(metric.size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

void check_subset(const Pseudometric& metric, std::span<const std::size_t> subset,
                  const char* what) {
  if (subset.empty()) throw InvalidArgument(std::string(what) + ": subset must be nonempty");
  for (auto p : subset)
    if (p >= metric.size()) throw InvalidArgument(std::string(what) + ": point out of range");
}

// Points at distance 0 have identical distances to everything else, so the
// solvers work on one representative per zero-distance class.
struct Twins {
  std::vector<std::size_t> reps;                  // point ids
  std::vector<std::vector<std::size_t>> members;  // point ids per rep
};

Twins collapse_twins(const Pseudometric& metric, std::span<const std::size_t> subset) {
  Twins t;
  for (auto p : subset) {
    bool placed = false;
    for (std::size_t r = 0; r < t.reps.size() && !placed; ++r) {
      if (metric(t.reps[r], p) == 0.0) {
        t.members[r].push_back(p);
        placed = true;
      }
    }
    if (!placed) {
      t.reps.push_back(p);
      t.members.push_back({p});
    }
  }
  return t;
}

// Graph on subset positions with an edge when the pair is strictly closer
// than `eps` (or at most `eps` when `closed`).
Graph threshold_graph(const Pseudometric& metric, std::span<const std::size_t> subset, double eps,
                      bool closed) {
  Graph g(subset.size());
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const double d = metric(subset[a], subset[b]);
      if (closed ? d <= eps : d < eps) g.connect(a, b);
    }
  }
  return g;
}

detail::SearchLimits limits_of(const SolverOptions& o) {
  return {o.max_exact_points, o.node_budget};
}

std::vector<std::size_t> to_points(std::span<const std::size_t> subset,
                                   const std::vector<std::size_t>& positions) {
  std::vector<std::size_t> out;
  out.reserve(positions.size());
  for (auto p : positions) out.push_back(subset[p]);
  std::sort(out.begin(), out.end());
  return out;
}

// Covering by neighbourhoods (open or closed) of subset points; components
// of the threshold graph are solved independently.
CountResult neighbourhood_cover(const Pseudometric& metric, std::span<const std::size_t> subset,
                                double radius, bool closed, SolveMode mode,
                                const SolverOptions& options) {
  const Twins twins = collapse_twins(metric, subset);
  if (twins.reps.size() < subset.size())
    return neighbourhood_cover(metric, twins.reps, radius, closed, mode, options);
  const Graph g = threshold_graph(metric, subset, radius, closed);
  CountResult r;
  r.exactness = mode == SolveMode::exact ? Exactness::exact : Exactness::upper_bound;
  std::vector<std::size_t> chosen;
  for (const auto& comp : detail::components(g)) {
    if (comp.size() == 1) {
      chosen.push_back(comp[0]);
      continue;
    }
    const Graph h = detail::induced(g, comp);
    std::vector<Bits> sets(comp.size(), Bits(comp.size()));
    for (std::size_t c = 0; c < comp.size(); ++c) {
      sets[c] = h.adj[c];
      sets[c].set(c);
    }
    const auto local = mode == SolveMode::exact
                           ? detail::min_set_cover(comp.size(), sets, limits_of(options))
                           : detail::greedy_set_cover(comp.size(), sets);
    for (auto c : local) chosen.push_back(comp[c]);
  }
  r.witness = to_points(subset, chosen);
  r.value = r.witness.size();
  return r;
}

}  // namespace

CountResult separated_number(const Pseudometric& metric, std::span<const std::size_t> subset,
                             double eps, SolveMode mode, const SolverOptions& options) {
  check_eps(eps, "separated_number");
  check_subset(metric, subset, "separated_number");
  const Twins twins = collapse_twins(metric, subset);
  if (twins.reps.size() < subset.size()) return separated_number(metric, twins.reps, eps, mode, options);
  const Graph g = threshold_graph(metric, subset, eps, false);
  CountResult r;
  std::vector<std::size_t> chosen;
  if (mode == SolveMode::greedy) {
    r.exactness = Exactness::lower_bound;
    chosen = detail::greedy_independent_set(g);
  } else {
    r.exactness = Exactness::exact;
    for (const auto& comp : detail::components(g)) {
      if (comp.size() == 1) {
        chosen.push_back(comp[0]);
        continue;
      }
      for (auto v : detail::max_independent_set(detail::induced(g, comp), limits_of(options)))
        chosen.push_back(comp[v]);
    }
  }
  r.witness = to_points(subset, chosen);
  r.value = r.witness.size();
  return r;
}

CountResult separated_number(const Pseudometric& metric, double eps, SolveMode mode,
                             const SolverOptions& options) {
  const auto all = all_points(metric);
  return separated_number(metric, all, eps, mode, options);
}

CountResult spanning_number(const Pseudometric& metric, std::span<const std::size_t> subset,
                            double eps, SolveMode mode, const SolverOptions& options) {
  check_eps(eps, "spanning_number");
  check_subset(metric, subset, "spanning_number");
  return neighbourhood_cover(metric, subset, eps, false, mode, options);
}

CountResult spanning_number(const Pseudometric& metric, double eps, SolveMode mode,
                            const SolverOptions& options) {
  const auto all = all_points(metric);
  return spanning_number(metric, all, eps, mode, options);
}

CountResult closed_ball_cover(const Pseudometric& metric, double radius, SolveMode mode,
                              const SolverOptions& options) {
  if (!(radius > 0.0)) throw InvalidArgument("closed_ball_cover: radius must be positive");
  const auto all = all_points(metric);
  return neighbourhood_cover(metric, all, radius, true, mode, options);
}

CountResult cover_number_mesh(const Pseudometric& metric, double eps, SolveMode mode,
                              const SolverOptions& options) {
  check_eps(eps, "cover_number_mesh");
  const auto all = all_points(metric);
  const Twins twins = collapse_twins(metric, all);
  const Graph g = threshold_graph(metric, twins.reps, eps, false);
  CountResult r;
  r.exactness = mode == SolveMode::exact ? Exactness::exact : Exactness::upper_bound;
  for (const auto& comp : detail::components(g)) {
    if (comp.size() == 1) {
      r.blocks.push_back({comp[0]});
      continue;
    }
    if (mode == SolveMode::exact && comp.size() > options.max_exact_points) {
      throw GuardExceeded("cover_number_mesh: component of " + std::to_string(comp.size()) +
                          " points exceeds exact limit " +
                          std::to_string(options.max_exact_points));
    }
    const Graph h = detail::induced(g, comp);
    if (mode == SolveMode::exact) {
      const auto cliques = detail::maximal_cliques(h, options.node_budget);
      const auto chosen = detail::min_set_cover(comp.size(), cliques, limits_of(options));
      // Maximal cliques overlap; assign each point to its first chosen block.
      Bits assigned(comp.size());
      for (auto c : chosen) {
        std::vector<std::size_t> block;
        Bits fresh = cliques[c];
        fresh.and_not(assigned);
        fresh.for_each([&](std::size_t v) { block.push_back(comp[v]); });
        assigned |= cliques[c];
        r.blocks.push_back(std::move(block));
      }
    } else {
      Bits left(comp.size());
      left.fill();
      while (left.any()) {
        const std::size_t seed = left.first();
        Bits allowed = left & h.adj[seed];
        std::vector<std::size_t> block{comp[seed]};
        left.reset(seed);
        while (allowed.any()) {
          const std::size_t v = allowed.first();
          block.push_back(comp[v]);
          left.reset(v);
          allowed.reset(v);
          allowed &= h.adj[v];
        }
        r.blocks.push_back(std::move(block));
      }
    }
  }
  // Blocks so far hold representative positions; expand to whole classes.
  for (auto& b : r.blocks) {
    std::vector<std::size_t> full;
    for (auto q : b) full.insert(full.end(), twins.members[q].begin(), twins.members[q].end());
    std::sort(full.begin(), full.end());
    b = std::move(full);
  }
  std::sort(r.blocks.begin(), r.blocks.end());
  for (const auto& b : r.blocks) r.witness.push_back(b.front());
  r.value = r.blocks.size();
  return r;
}

}  // namespace sofmdim
