#include "sofmdim/dynsys.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "sofmdim/errors.hpp"
#include "sofmdim/power_mean.hpp"
#include "sofmdim/random.hpp"
#include "sofmdim/sofic.hpp"

namespace sofmdim {

namespace {

PointMap compose(const PointMap& outer, const PointMap& inner) {
  PointMap out(inner.size());
  for (std::size_t x = 0; x < inner.size(); ++x) out[x] = outer[inner[x]];
  return out;
}

PointMap identity_map(std::size_t n) {
  PointMap m(n);
  std::iota(m.begin(), m.end(), 0U);
  return m;
}

PointMap power(const PointMap& m, std::int64_t k) {
  PointMap out = identity_map(m.size());
  for (std::int64_t i = 0; i < k; ++i) out = compose(m, out);
  return out;
}

PointMap invert(const PointMap& m) {
  PointMap out(m.size());
  for (std::size_t x = 0; x < m.size(); ++x) out[m[x]] = static_cast<std::uint32_t>(x);
  return out;
}

void check_guard(std::size_t points, const InstanceGuard& guard, const char* what) {
  if (points > guard.max_points)
    throw GuardExceeded(std::string(what) + ": " + std::to_string(points) +
                        " points exceed instance guard " + std::to_string(guard.max_points));
}

std::size_t checked_power(std::size_t base, std::size_t exp, const InstanceGuard& guard,
                          const char* what) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > guard.max_points / base) check_guard(guard.max_points + 1, guard, what);
    out *= base;
  }
  check_guard(out, guard, what);
  return out;
}

}  // namespace

DynSystem::DynSystem(FinitePseudometricSpace space, GroupModel group,
                     std::vector<PointMap> generator_maps, bool strict_action)
    : space_(std::move(space)), group_(group), maps_(std::move(generator_maps)), strict_(strict_action) {
  const std::size_t n = space_.size();
  const auto labels = group_.generator_labels();
  if (maps_.size() != labels.size())
    throw InvalidArgument("DynSystem: expected " + std::to_string(labels.size()) +
                          " generator maps for " + group_.name());
  inverses_.resize(maps_.size());
  for (std::size_t k = 0; k < maps_.size(); ++k) {
    if (maps_[k].size() != n)
      throw InvalidArgument("DynSystem: map for generator " + labels[k] + " is not total");
    for (auto x : maps_[k])
      if (x >= n) throw InvalidArgument("DynSystem: map for generator " + labels[k] + " leaves the space");
    if (is_bijection(maps_[k])) {
      inverses_[k] = invert(maps_[k]);
    } else if (strict_) {
      throw InvalidArgument("DynSystem: strict action needs bijective generator " + labels[k]);
    }
  }
  if (!strict_) return;
  if (group_.kind() == GroupKind::cyclic && power(maps_[0], group_.modulus()) != identity_map(n))
    throw InvalidArgument("DynSystem: generator order does not divide " +
                          std::to_string(group_.modulus()));
  if (group_.kind() == GroupKind::integer_pairs &&
      compose(maps_[0], maps_[1]) != compose(maps_[1], maps_[0]))
    throw InvalidArgument("DynSystem: integer-pair generators do not commute");
}

PointMap DynSystem::action(const Element& g) const {
  const auto word = group_.letters(g);
  PointMap out = identity_map(size());
  // alpha_{l1 ... lk} = alpha_{l1} o ... o alpha_{lk}: apply lk first.
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const PointMap* m = &maps_[it->generator];
    if (it->sign < 0) {
      if (inverses_[it->generator].empty())
        throw UndefinedElement("action undefined on " + group_.format(g) +
                               ": generator map is not invertible");
      m = &inverses_[it->generator];
    }
    for (auto& x : out) x = (*m)[x];
  }
  return out;
}

std::vector<Element> elements_up_to_length(const GroupModel& group, std::size_t r) {
  const auto R = static_cast<std::int64_t>(r);
  std::vector<Element> out;
  switch (group.kind()) {
    case GroupKind::integers:
      for (std::int64_t k = -R; k <= R; ++k) out.push_back(group.integer(k));
      break;
    case GroupKind::integer_pairs:
      for (std::int64_t a = -R; a <= R; ++a)
        for (std::int64_t b = -R; b <= R; ++b)
          if (std::abs(a) + std::abs(b) <= R) out.push_back(group.pair(a, b));
      break;
    case GroupKind::cyclic:
      for (std::int64_t k = 0; k <= std::min(R, group.modulus() - 1); ++k)
        out.push_back(group.residue(k));
      break;
    case GroupKind::free_rank2: return FolnerSet::ball(r).elements();
  }
  return out;
}

std::vector<std::string> DynSystem::check_action(std::size_t max_length) const {
  std::vector<std::string> out;
  const auto elems = elements_up_to_length(group_, max_length);
  std::vector<PointMap> tables;
  for (const auto& g : elems) {
    try {
      tables.push_back(action(g));
    } catch (const UndefinedElement& e) {
      out.push_back(e.what());
      return out;
    }
  }
  if (action(group_.identity()) != identity_map(size())) out.push_back("alpha_e is not the identity");
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      PointMap gh;
      try {
        gh = action(group_.multiply(elems[i], elems[j]));
      } catch (const UndefinedElement& e) {
        out.push_back(e.what());
        continue;
      }
      if (compose(tables[i], tables[j]) != gh)
        out.push_back("alpha_g alpha_h != alpha_gh for g = " + group_.format(elems[i]) +
                      ", h = " + group_.format(elems[j]));
    }
  }
  return out;
}

DynSystem make_periodic_shift(const FinitePseudometricSpace& alphabet, std::size_t period,
                              InstanceGuard guard) {
  if (period < 1) throw InvalidArgument("make_periodic_shift: period must be >= 1");
  const std::size_t a = alphabet.size();
  const std::size_t n = checked_power(a, period, guard, "make_periodic_shift");
  std::size_t top = 1;
  for (std::size_t k = 1; k < period; ++k) top *= a;

  PointMap shift(n);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t x0 = x % a;
    // (x_0, x_1, ..., x_{n-1}) -> (x_1, ..., x_{n-1}, x_0)
    shift[x] = static_cast<std::uint32_t>(x / a + x0 * top);
    labels[x] = alphabet.label(x0);
  }
  std::vector<double> base(alphabet.base_size() * alphabet.base_size());
  for (std::size_t i = 0; i < alphabet.base_size(); ++i)
    for (std::size_t j = 0; j < alphabet.base_size(); ++j)
      base[i * alphabet.base_size() + j] = alphabet.base_distance(i, j);
  FinitePseudometricSpace space(std::move(labels), alphabet.base_size(), std::move(base));
  return DynSystem(std::move(space), GroupModel::integers(), {std::move(shift)}, true);
}

DynSystem make_grid_interval_shift(std::size_t m, std::size_t period, InstanceGuard guard) {
  if (m < 1) throw InvalidArgument("make_grid_interval_shift: m must be >= 1");
  std::vector<double> grid(m + 1);
  for (std::size_t k = 0; k <= m; ++k) grid[k] = static_cast<double>(k) / static_cast<double>(m);
  return make_periodic_shift(FinitePseudometricSpace::line(grid), period, guard);
}

DynSystem make_product(const DynSystem& x, const DynSystem& y, InstanceGuard guard) {
  if (!(x.group() == y.group()))
    throw InvalidArgument("make_product: factors carry different group models");
  const std::size_t nx = x.size();
  const std::size_t ny = y.size();
  if (ny != 0 && nx > guard.max_points / ny) check_guard(guard.max_points + 1, guard, "make_product");
  const std::size_t n = nx * ny;
  check_guard(n, guard, "make_product");

  const auto& sx = x.space();
  const auto& sy = y.space();
  const std::size_t kx = sx.base_size();
  const std::size_t ky = sy.base_size();
  std::vector<double> base(kx * ky * kx * ky);
  for (std::size_t a1 = 0; a1 < kx; ++a1)
    for (std::size_t b1 = 0; b1 < ky; ++b1)
      for (std::size_t a2 = 0; a2 < kx; ++a2)
        for (std::size_t b2 = 0; b2 < ky; ++b2)
          base[(a1 * ky + b1) * (kx * ky) + (a2 * ky + b2)] =
              std::max(sx.base_distance(a1, a2), sy.base_distance(b1, b2));
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      labels[i * ny + j] = static_cast<std::uint32_t>(sx.label(i) * ky + sy.label(j));

  std::vector<PointMap> maps;
  for (std::size_t k = 0; k < x.generator_maps().size(); ++k) {
    const auto& mx = x.generator_maps()[k];
    const auto& my = y.generator_maps()[k];
    PointMap m(n);
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j)
        m[i * ny + j] = static_cast<std::uint32_t>(mx[i] * ny + my[j]);
    maps.push_back(std::move(m));
  }
  return DynSystem(FinitePseudometricSpace(std::move(labels), kx * ky, std::move(base)), x.group(),
                   std::move(maps), x.strict_action() && y.strict_action());
}

FinitePseudometricSpace make_random_space(std::size_t n, std::uint64_t seed, MetricStyle style) {
  if (n < 1) throw InvalidArgument("make_random_space: need at least one point");
  Rng rng(seed);
  std::vector<std::vector<double>> t(n, std::vector<double>(n, 0.0));
  if (style == MetricStyle::euclidean_embedding) {
    std::vector<std::array<double, 2>> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Occasional repeated points make the result a genuine pseudometric.
      if (i > 0 && rng.coin(0.1)) {
        pts[i] = pts[rng.below(i)];
      } else {
        pts[i] = {rng.unit(), rng.unit()};
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        t[i][j] = t[j][i] = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
  } else {
    // Random agglomerative merge tree; d(i, j) is the merge height of the
    // clusters joining i and j, which is an ultrametric by construction.
    std::vector<std::vector<std::size_t>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
    double height = 0.0;
    bool zero_phase = rng.coin(0.3);
    while (clusters.size() > 1) {
      if (zero_phase && rng.coin(0.5)) zero_phase = false;
      if (!zero_phase) height += 0.05 + rng.unit();
      const std::size_t a = rng.below(clusters.size());
      std::size_t b = rng.below(clusters.size() - 1);
      if (b >= a) ++b;
      for (auto i : clusters[a])
        for (auto j : clusters[b]) t[i][j] = t[j][i] = height;
      clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
      clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
    }
    if (height > 0.0)
      for (auto& row : t)
        for (auto& v : row) v /= height;
  }
  return FinitePseudometricSpace(t);
}

namespace {

PointMap random_permutation(Rng& rng, std::size_t n) {
  PointMap p = identity_map(n);
  rng.shuffle(p);
  return p;
}

PointMap random_self_map(Rng& rng, std::size_t n) {
  PointMap p(n);
  for (auto& v : p) v = static_cast<std::uint32_t>(rng.below(n));
  return p;
}

// Permutation whose cycle lengths all divide m.
PointMap random_permutation_of_order(Rng& rng, std::size_t n, std::int64_t m) {
  std::vector<std::size_t> divisors;
  for (std::int64_t k = 1; k <= m; ++k)
    if (m % k == 0) divisors.push_back(static_cast<std::size_t>(k));
  PointMap order = identity_map(n);
  rng.shuffle(order);
  PointMap p(n);
  std::size_t at = 0;
  while (at < n) {
    std::vector<std::size_t> fit;
    for (auto d : divisors)
      if (d <= n - at) fit.push_back(d);
    const std::size_t len = rng.pick(fit);
    for (std::size_t i = 0; i < len; ++i) p[order[at + i]] = order[at + (i + 1) % len];
    at += len;
  }
  return p;
}

}  // namespace

DynSystem make_random_system(const GroupModel& group, std::size_t n_points, std::uint64_t seed,
                             MetricStyle style, bool bijective) {
  FinitePseudometricSpace space = make_random_space(n_points, seed, style);
  Rng rng = Rng::stream(seed, 1);
  std::vector<PointMap> maps;
  const std::size_t gens = group.generator_labels().size();
  if (!bijective) {
    for (std::size_t k = 0; k < gens; ++k) maps.push_back(random_self_map(rng, n_points));
    return DynSystem(std::move(space), group, std::move(maps), false);
  }
  switch (group.kind()) {
    case GroupKind::integers:
    case GroupKind::free_rank2:
      for (std::size_t k = 0; k < gens; ++k) maps.push_back(random_permutation(rng, n_points));
      break;
    case GroupKind::cyclic:
      maps.push_back(random_permutation_of_order(rng, n_points, group.modulus()));
      break;
    case GroupKind::integer_pairs: {
      PointMap a = random_permutation(rng, n_points);
      PointMap b = power(a, rng.between(0, 3));
      maps.push_back(std::move(a));
      maps.push_back(std::move(b));
      break;
    }
  }
  return DynSystem(std::move(space), group, std::move(maps), true);
}

OrbitPseudometric::OrbitPseudometric(const DynSystem& sys, const FolnerSet& F, double p)
    : space_(&sys.space()), p_(p) {
  check_exponent(p);
  if (!(F.group() == sys.group())) throw InvalidArgument("orbit pseudometric: group mismatch");
  tables_.reserve(F.size());
  for (const auto& g : F.elements()) tables_.push_back(sys.action(g));
}

double OrbitPseudometric::operator()(std::size_t x, std::size_t y) const {
  PowerMean mean(p_);
  for (const auto& t : tables_) mean.add((*space_)(t[x], t[y]));
  return mean.value();
}

double orbit_pseudometric(const DynSystem& sys, const FolnerSet& F, double p, std::size_t x,
                          std::size_t y) {
  if (x >= sys.size() || y >= sys.size()) throw InvalidArgument("orbit_pseudometric: point out of range");
  return OrbitPseudometric(sys, F, p)(x, y);
}

OrbitMap orbit_map(const DynSystem& sys, const FolnerSet& F, std::size_t x) {
  if (x >= sys.size()) throw InvalidArgument("orbit_map: point out of range");
  if (!(F.group() == sys.group())) throw InvalidArgument("orbit_map: group mismatch");
  OrbitMap m{x, F.elements(), {}};
  m.values.reserve(F.size());
  for (const auto& g : F.elements()) m.values.push_back(sys.action(g)[x]);
  return m;
}

}  // namespace sofmdim
