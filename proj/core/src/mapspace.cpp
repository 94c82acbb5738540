#include "sofmdim/mapspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "sofmdim/errors.hpp"
#include "sofmdim/power_mean.hpp"
#include "sofmdim/random.hpp"

namespace sofmdim {

namespace {

// sigma_s and alpha_s for every s in F, resolved once.
class EquivarianceKernel {
 public:
  EquivarianceKernel(const MapSpaceSpec& spec, double exponent)
      : space_(&spec.system.space()), delta_(spec.delta), q_(exponent), d_(spec.sigma.d()) {
    check_exponent(exponent);
    for (const auto& s : spec.F.elements()) {
      sigma_.push_back(spec.sigma.image(s));
      alpha_.push_back(spec.system.action(s));
    }
  }

  std::size_t d() const { return d_; }
  std::size_t points() const { return space_->size(); }
  std::size_t terms() const { return sigma_.size(); }

  double defect(std::size_t s, std::size_t v, const std::vector<std::uint32_t>& phi) const {
    return (*space_)(phi[sigma_[s](v)], alpha_[s][phi[v]]);
  }

  double residual(const std::vector<std::uint32_t>& phi) const {
    double worst = 0.0;
    for (std::size_t s = 0; s < sigma_.size(); ++s) {
      PowerMean mean(q_);
      for (std::size_t v = 0; v < d_; ++v) mean.add(defect(s, v, phi));
      worst = std::max(worst, mean.value());
    }
    return worst;
  }

  Membership check(const std::vector<std::uint32_t>& phi) const {
    const double r = residual(phi);
    return {r <= delta_, r};
  }

  const Permutation& sigma(std::size_t s) const { return sigma_[s]; }
  double q() const { return q_; }
  double delta() const { return delta_; }

 private:
  const FinitePseudometricSpace* space_;
  double delta_;
  double q_;
  std::size_t d_;
  std::vector<Permutation> sigma_;
  std::vector<PointMap> alpha_;
};

double term_power(double x, double q) {
  if (q == 1.0) return x;
  if (q == 2.0) return x * x;
  return std::pow(x, q);
}

void check_tuple(const MapSpaceSpec& spec, const MapTuple& phi) {
  if (phi.d() != spec.sigma.d())
    throw InvalidArgument("map tuple has length " + std::to_string(phi.d()) + ", expected d = " +
                          std::to_string(spec.sigma.d()));
  for (auto x : phi.values)
    if (x >= spec.system.size()) throw InvalidArgument("map tuple entry out of range");
}

std::uint64_t candidate_count(std::size_t points, std::size_t d, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (total > cap / points) return cap + 1;
    total *= points;
  }
  return total;
}

// Depth-first enumeration in lexicographic order. A branch is cut as soon as
// the completed defect terms of some s already exceed the budget; leaves are
// confirmed with the exact membership test.
class Enumerator {
 public:
  explicit Enumerator(const EquivarianceKernel& k) : k_(k), phi_(k.d(), 0) {
    const double slack = 1.0 + 1e-9;
    limit_ = term_power(k.delta(), k.q()) * static_cast<double>(k.d()) * slack + 1e-300;
    ready_.resize(k.d());
    for (std::size_t s = 0; s < k.terms(); ++s)
      for (std::size_t v = 0; v < k.d(); ++v)
        ready_[std::max<std::size_t>(v, k.sigma(s)(v))].push_back({s, v});
  }

  std::vector<MapTuple> run() {
    std::vector<double> sums(k_.terms(), 0.0);
    descend(0, sums);
    return std::move(out_);
  }

 private:
  struct Term {
    std::size_t s;
    std::size_t v;
  };

  void descend(std::size_t pos, const std::vector<double>& sums) {
    if (pos == k_.d()) {
      if (k_.check(phi_).member) out_.push_back(MapTuple{phi_});
      return;
    }
    std::vector<double> next(sums.size());
    for (std::size_t x = 0; x < k_.points(); ++x) {
      phi_[pos] = static_cast<std::uint32_t>(x);
      next = sums;
      bool alive = true;
      for (const auto& t : ready_[pos]) {
        next[t.s] += term_power(k_.defect(t.s, t.v, phi_), k_.q());
        if (next[t.s] > limit_) {
          alive = false;
          break;
        }
      }
      if (alive) descend(pos + 1, next);
    }
  }

  const EquivarianceKernel& k_;
  std::vector<std::uint32_t> phi_;
  std::vector<std::vector<Term>> ready_;
  double limit_;
  std::vector<MapTuple> out_;
};

}  // namespace

void validate(const MapSpaceSpec& spec) {
  if (!(spec.delta >= 0.0)) throw InvalidArgument("map space: delta must be nonnegative");
  if (!(spec.sigma.group() == spec.system.group()) || !(spec.F.group() == spec.system.group()))
    throw InvalidArgument("map space: system, sigma and F use different groups");
  for (const auto& s : spec.F.elements()) {
    if (!spec.sigma.defined(s))
      throw UndefinedElement("sofic approximation undefined on " + spec.F.group().format(s));
    (void)spec.system.action(s);
  }
}

double map_distance(const Pseudometric& space, const MapTuple& phi, const MapTuple& psi, double p) {
  check_exponent(p);
  if (phi.d() != psi.d()) throw InvalidArgument("map_distance: tuples have different lengths");
  PowerMean mean(p);
  for (std::size_t v = 0; v < phi.d(); ++v) {
    if (phi.values[v] >= space.size() || psi.values[v] >= space.size())
      throw InvalidArgument("map_distance: entry out of range");
    mean.add(space(phi.values[v], psi.values[v]));
  }
  return mean.value();
}

Membership is_member(const MapSpaceSpec& spec, const MapTuple& phi, double exponent) {
  check_tuple(spec, phi);
  return EquivarianceKernel(spec, exponent).check(phi.values);
}

std::vector<MapTuple> enumerate_mapspace(const MapSpaceSpec& spec, const MapSpaceOptions& options) {
  validate(spec);
  const std::uint64_t total =
      candidate_count(spec.system.size(), spec.sigma.d(), options.exhaustive_guard);
  if (total > options.exhaustive_guard) {
    throw GuardExceeded("enumerate_mapspace: |X|^d exceeds exhaustive guard " +
                        std::to_string(options.exhaustive_guard));
  }
  EquivarianceKernel kernel(spec, options.membership_exponent);
  return Enumerator(kernel).run();
}

std::vector<MapTuple> sample_mapspace(const MapSpaceSpec& spec, std::uint64_t seed,
                                      std::size_t budget, const MapSpaceOptions& options) {
  validate(spec);
  if (budget == 0) throw InvalidArgument("sample_mapspace: budget must be positive");
  const EquivarianceKernel kernel(spec, options.membership_exponent);
  const std::size_t n = spec.system.size();
  const std::size_t d = spec.sigma.d();
  std::set<MapTuple> found;
  auto offer = [&](const std::vector<std::uint32_t>& phi) {
    if (found.size() < budget && kernel.check(phi).member) found.insert(MapTuple{phi});
  };

  // Orbit maps of a Folner-built approximation are natural members.
  if (const auto& index = spec.sigma.index_elements()) {
    try {
      std::vector<PointMap> tables;
      for (const auto& g : *index) tables.push_back(spec.system.action(g));
      for (std::size_t x = 0; x < n && found.size() < budget; ++x) {
        std::vector<std::uint32_t> phi(d);
        for (std::size_t v = 0; v < d; ++v) phi[v] = tables[v][x];
        offer(phi);
      }
    } catch (const UndefinedElement&) {
      // Non-invertible action: no orbit maps over this index set.
    }
  }

  Rng rng = Rng::stream(seed, 0);
  auto random_tuple = [&] {
    std::vector<std::uint32_t> phi(d);
    for (auto& x : phi) x = static_cast<std::uint32_t>(rng.below(n));
    return phi;
  };

  for (std::size_t draw = 0; draw < 16 * budget && found.size() < budget; ++draw) offer(random_tuple());

  Rng descent_rng = Rng::stream(seed, 1);
  for (std::size_t start = 0; start < 4 * budget && found.size() < budget; ++start) {
    std::vector<std::uint32_t> phi(d);
    for (auto& x : phi) x = static_cast<std::uint32_t>(descent_rng.below(n));
    double current = kernel.residual(phi);
    for (std::size_t step = 0; step < 4 * d + 4 && current > spec.delta; ++step) {
      double best = current;
      std::size_t best_v = d;
      std::uint32_t best_x = 0;
      for (std::size_t v = 0; v < d; ++v) {
        const std::uint32_t keep = phi[v];
        for (std::size_t x = 0; x < n; ++x) {
          if (x == keep) continue;
          phi[v] = static_cast<std::uint32_t>(x);
          const double r = kernel.residual(phi);
          if (r < best) {
            best = r;
            best_v = v;
            best_x = static_cast<std::uint32_t>(x);
          }
        }
        phi[v] = keep;
      }
      if (best_v == d) break;
      phi[best_v] = best_x;
      current = best;
    }
    offer(phi);
  }
  return {found.begin(), found.end()};
}

MapSpaceMetric::MapSpaceMetric(const FinitePseudometricSpace& space,
                               const std::vector<MapTuple>& members, double p)
    : space_(&space), members_(&members), p_(p) {
  check_exponent(p);
}

double MapSpaceMetric::operator()(std::size_t i, std::size_t j) const {
  const auto& a = (*members_)[i].values;
  const auto& b = (*members_)[j].values;
  PowerMean mean(p_);
  for (std::size_t v = 0; v < a.size(); ++v) mean.add((*space_)(a[v], b[v]));
  return mean.value();
}

const char* to_string(CountKind k) { return k == CountKind::separated ? "separated" : "spanning"; }

MemberSet obtain_members(const MapSpaceSpec& spec, const MapSpaceOptions& options) {
  validate(spec);
  const std::uint64_t total =
      candidate_count(spec.system.size(), spec.sigma.d(), options.exhaustive_guard);
  if (total <= options.exhaustive_guard) return {enumerate_mapspace(spec, options), true};
  return {sample_mapspace(spec, options.seed, options.sample_budget, options), false};
}

CountResult count_members(const FinitePseudometricSpace& space, const MemberSet& set, double eps,
                          double p, CountKind which, SolveMode mode, const MapSpaceOptions& options) {
  if (!(eps > 0.0)) throw InvalidArgument("count_members: eps must be positive");
  check_exponent(p);
  const std::vector<MapTuple>* members = &set.members;
  bool complete = set.complete;
  std::vector<MapTuple> subsample;
  if (members->size() > options.count_cap) {
    std::vector<std::size_t> idx(members->size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng = Rng::stream(options.seed, 2);
    rng.shuffle(idx);
    idx.resize(options.count_cap);
    std::sort(idx.begin(), idx.end());
    for (auto i : idx) subsample.push_back((*members)[i]);
    members = &subsample;
    complete = false;
  }
  if (members->empty()) {
    CountResult r;
    r.exactness = complete ? Exactness::exact : Exactness::lower_bound;
    return r;
  }
  const MapSpaceMetric metric(space, *members, p);
  CountResult r;
  if (which == CountKind::separated) {
    r = separated_number(metric, eps, mode, options.solver);
  } else if (complete) {
    r = spanning_number(metric, eps, mode, options.solver);
  } else {
    r = separated_number(metric, 2.0 * eps, mode, options.solver);
  }
  if (!complete) r.exactness = Exactness::lower_bound;
  return r;
}

CountResult mapspace_count(const MapSpaceSpec& spec, double eps, double p, CountKind which,
                           SolveMode mode, const MapSpaceOptions& options) {
  return count_members(spec.system.space(), obtain_members(spec, options), eps, p, which, mode,
                       options);
}

void summarize(StageSeries& series, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw InvalidArgument("tail_fraction must lie in (0, 1]");
  const std::size_t k = series.stages.size();
  if (k == 0) {
    series.tail_size = 0;
    series.liminf_proxy = series.limsup_proxy = -kInfinity;
    return;
  }
  std::size_t tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(k)));
  tail = std::clamp<std::size_t>(tail, 1, k);
  series.tail_size = tail;
  double lo = kInfinity;
  double hi = -kInfinity;
  for (std::size_t i = k - tail; i < k; ++i) {
    lo = std::min(lo, series.stages[i].value);
    hi = std::max(hi, series.stages[i].value);
  }
  series.liminf_proxy = lo;
  series.limsup_proxy = hi;
}

namespace {

double stage_value(std::size_t count, std::size_t d) {
  if (count == 0) return -kInfinity;
  return std::log(static_cast<double>(count)) / static_cast<double>(d);
}

}  // namespace

StageSeries finite_stage_h(const DynSystem& sys, std::span<const SoficApproximation> sigmas,
                           const FolnerSet& F, double delta, double eps, double p,
                           double tail_fraction, SolveMode mode, const MapSpaceOptions& options) {
  StageSeries series;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    MapSpaceOptions stage_options = options;
    stage_options.seed = Rng::stream(options.seed, i).next();
    const MapSpaceSpec spec{sys, sigmas[i], F, delta};
    const CountResult c = mapspace_count(spec, eps, p, CountKind::separated, mode, stage_options);
    series.stages.push_back({i, sigmas[i].d(), c.value, c.exactness, stage_value(c.value, sigmas[i].d())});
  }
  summarize(series, tail_fraction);
  return series;
}

double abs_log(double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("abs_log: eps must be positive");
  return eps < 1.0 ? -std::log(eps) : std::log(eps);
}

AmenableSeries amenable_finite_stage(const DynSystem& sys, std::span<const FolnerSet> Fns,
                                     double eps, double p, double tail_fraction, SolveMode mode,
                                     const SolverOptions& solver) {
  AmenableSeries out;
  const double scale = abs_log(eps);
  for (std::size_t i = 0; i < Fns.size(); ++i) {
    const OrbitPseudometric metric(sys, Fns[i], p);
    const CountResult c = separated_number(metric, eps, mode, solver);
    const double value = stage_value(c.value, Fns[i].size());
    out.series.stages.push_back({i, Fns[i].size(), c.value, c.exactness, value});
    out.ratios.push_back(value == 0.0 ? 0.0 : value / scale);
  }
  summarize(out.series, tail_fraction);
  return out;
}

}  // namespace sofmdim
