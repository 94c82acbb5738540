#include "sofmdim/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sofmdim/errors.hpp"
#include "sofmdim/power_mean.hpp"

namespace sofmdim {

double binary_entropy(double c) {
  if (c <= 0.0 || c >= 1.0) return 0.0;
  return -c * std::log(c) - (1.0 - c) * std::log1p(-c);
}

long double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0L;
  if (n > 64) throw InvalidArgument("binomial: n must be <= 64 for the exact path");
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::size_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return static_cast<long double>(c);
}

namespace {

constexpr double kCap = 0.49;

bool binomial_bound_holds(double c, double lambda, std::size_t max_d) {
  for (std::size_t d = 1; d <= max_d; ++d) {
    const auto k = static_cast<std::size_t>(std::floor(c * static_cast<double>(d)));
    if (binomial(d, k) > std::pow(static_cast<long double>(lambda), static_cast<long double>(d) / 2.0L))
      return false;
  }
  return true;
}

double epsilon_prime(double c, double p, double eps) {
  const double scale = std::isinf(p) ? 1.0 : std::pow(c, 1.0 / p);
  return scale * eps / 2.0;
}

}  // namespace

Prop32Constants compute_prop32_constants(double lambda, std::size_t M, double p, double eps,
                                         std::size_t max_d) {
  if (!(lambda > 1.0)) throw InvalidArgument("compute_prop32_constants: lambda must exceed 1");
  if (M < 1) throw InvalidArgument("compute_prop32_constants: M must be >= 1");
  if (!(eps > 0.0)) throw InvalidArgument("compute_prop32_constants: eps must be positive");
  if (max_d > 64) throw InvalidArgument("compute_prop32_constants: direct check limited to d <= 64");
  check_exponent(p);

  const double target = std::log(lambda) / 2.0;
  double c_entropy = kCap;
  if (binary_entropy(kCap) > target) {
    // H is increasing on (0, 1/2); keep the end of the bracket with H <= target.
    double lo = 0.0;
    double hi = kCap;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (binary_entropy(mid) <= target ? lo : hi) = mid;
    }
    c_entropy = lo;
  }
  // Shrunk by a relative 1e-12 so that M^c <= lambda^(1/2) survives rounding.
  const double c_balls =
      M == 1 ? kInfinity : std::log(lambda) / (2.0 * std::log(static_cast<double>(M))) * (1.0 - 1e-12);

  double c = std::min({c_entropy, c_balls, kCap});
  int attempts = 0;
  while (!binomial_bound_holds(c, lambda, max_d)) {
    if (++attempts > 10)
      throw InvalidArgument("compute_prop32_constants: binomial bound fails after 10 shrinks");
    c *= 0.9;
  }
  return {lambda, M, c, p, eps, epsilon_prime(c, p, eps), max_d};
}

std::vector<std::string> check_constants(const Prop32Constants& k) {
  std::vector<std::string> out;
  if (!(k.c > 0.0 && k.c < 0.5)) out.push_back("c outside (0, 1/2)");
  if (std::pow(static_cast<double>(k.M), k.c) > std::sqrt(k.lambda)) out.push_back("M^c > lambda^(1/2)");
  if (k.eps_prime != epsilon_prime(k.c, k.p, k.eps)) out.push_back("eps' != c^(1/p) eps / 2");
  if (!binomial_bound_holds(k.c, k.lambda, k.checked_up_to))
    out.push_back("binomial(d, floor(c d)) > lambda^(d/2) for some d <= " +
                  std::to_string(k.checked_up_to));
  return out;
}

std::size_t ball_cover_count(const FinitePseudometricSpace& space, double radius,
                             const SolverOptions& solver) {
  return closed_ball_cover(space, radius, SolveMode::exact, solver).value;
}

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass(); });
}

double VerificationReport::quantity(const std::string& name) const {
  for (const auto& [k, v] : quantities)
    if (k == name) return v;
  throw InvalidArgument("report has no quantity '" + name + "'");
}

namespace {

std::string describe(const MapSpaceSpec& spec) {
  std::ostringstream s;
  s << "|X|=" << spec.system.size() << " d=" << spec.sigma.d() << " |F|=" << spec.F.size()
    << " delta=" << spec.delta;
  return s.str();
}

MemberSet exact_members(const MapSpaceSpec& spec, const VerifyOptions& options) {
  MemberSet set{enumerate_mapspace(spec, options.mapspace), true};
  if (set.members.size() > options.mapspace.count_cap)
    throw InexactCount("map space with " + std::to_string(set.members.size()) +
                       " members exceeds the exact counting cap " +
                       std::to_string(options.mapspace.count_cap));
  return set;
}

std::size_t exact_count(const FinitePseudometricSpace& space, const MemberSet& set, double eps,
                        double p, CountKind which, const VerifyOptions& options,
                        VerificationReport& report, const std::string& label) {
  const CountResult r = count_members(space, set, eps, p, which, SolveMode::exact, options.mapspace);
  if (r.exactness != Exactness::exact) throw InexactCount(label + " is only a bound");
  report.quantities.emplace_back(label, static_cast<double>(r.value));
  report.provenance.emplace_back(label, r.exactness);
  return r.value;
}

double dvalue(std::size_t v) { return static_cast<double>(v); }

}  // namespace

VerificationReport verify_prop31(const MapSpaceSpec& spec, double eps, double p,
                                 const VerifyOptions& options) {
  VerificationReport report;
  report.instance = describe(spec) + " eps=" + std::to_string(eps) + " p=" + std::to_string(p);
  const MemberSet set = exact_members(spec, options);
  report.quantities.emplace_back("members", dvalue(set.members.size()));
  const auto& space = spec.system.space();
  const std::size_t np = exact_count(space, set, eps, p, CountKind::separated, options, report, "N_eps_rho_p");
  const std::size_t ninf =
      exact_count(space, set, eps, kInfinity, CountKind::separated, options, report, "N_eps_rho_inf");
  report.checks.push_back({"prop31", dvalue(np), dvalue(ninf), dvalue(ninf) - dvalue(np), ""});
  return report;
}

VerificationReport verify_prop32(const MapSpaceSpec& spec, double eps, double p, double lambda,
                                 const VerifyOptions& options) {
  if (std::isinf(p)) throw InvalidArgument("verify_prop32: p must be finite");
  VerificationReport report;
  report.instance = describe(spec) + " eps=" + std::to_string(eps) + " p=" + std::to_string(p) +
                    " lambda=" + std::to_string(lambda);
  const auto& space = spec.system.space();
  const std::size_t M = ball_cover_count(space, eps / 2.0, options.mapspace.solver);
  const Prop32Constants k = compute_prop32_constants(lambda, M, p, eps);
  report.quantities.emplace_back("M", dvalue(M));
  report.quantities.emplace_back("c", k.c);
  report.quantities.emplace_back("eps_prime", k.eps_prime);

  const auto violations = check_constants(k);
  std::string joined;
  for (const auto& v : violations) joined += (joined.empty() ? "" : "; ") + v;
  report.checks.push_back({"prop32_constants", dvalue(violations.size()), 0.0,
                           0.0 - dvalue(violations.size()), joined});

  const MemberSet set = exact_members(spec, options);
  report.quantities.emplace_back("members", dvalue(set.members.size()));
  const std::size_t nprime =
      exact_count(space, set, k.eps_prime, p, CountKind::separated, options, report, "N_eps_prime_rho_p");
  const std::size_t n =
      exact_count(space, set, eps, kInfinity, CountKind::separated, options, report, "N_eps_rho_inf");

  const auto d = static_cast<long double>(spec.sigma.d());
  const long double lhs_log = d * std::log(static_cast<long double>(lambda)) +
                              (nprime > 0 ? std::log(static_cast<long double>(nprime)) : -INFINITY);
  if (n == 0) {
    report.checks.push_back({"prop32", 0.0, 0.0, 0.0, "empty map space"});
  } else {
    const long double rhs_log = std::log(static_cast<long double>(n));
    report.checks.push_back({"prop32", static_cast<double>(lhs_log), static_cast<double>(rhs_log),
                             static_cast<double>(lhs_log - rhs_log), "log form"});
  }
  return report;
}

namespace {

struct ProductCounts {
  std::size_t d = 0;
  std::size_t s_x = 0, s_y = 0, s_prod = 0;
  std::size_t n_x = 0, n_y = 0, n_prod2 = 0;
  std::size_t subset_violations = 0;
  std::size_t superset_violations = 0;
};

ProductCounts product_counts(const DynSystem& x, const DynSystem& y, const SoficApproximation& sigma,
                             const FolnerSet& F, double delta, double eps,
                             const VerifyOptions& options, VerificationReport& report) {
  const DynSystem prod = make_product(x, y);
  const MapSpaceSpec sx{x, sigma, F, delta};
  const MapSpaceSpec sy{y, sigma, F, delta};
  const MapSpaceSpec sp1{prod, sigma, F, delta};
  const MapSpaceSpec sp2{prod, sigma, F, 2.0 * delta};
  const MemberSet mx = exact_members(sx, options);
  const MemberSet my = exact_members(sy, options);
  const MemberSet mp1 = exact_members(sp1, options);
  const MemberSet mp2{enumerate_mapspace(sp2, options.mapspace), true};

  ProductCounts c;
  c.d = sigma.d();
  const std::size_t ny = y.size();
  report.quantities.emplace_back("members_x", dvalue(mx.members.size()));
  report.quantities.emplace_back("members_y", dvalue(my.members.size()));
  report.quantities.emplace_back("members_prod_delta", dvalue(mp1.members.size()));
  report.quantities.emplace_back("members_prod_2delta", dvalue(mp2.members.size()));

  // Map(rho x rho', delta) subset of Map(rho, delta) x Map(rho', delta).
  for (const auto& z : mp1.members) {
    MapTuple phi, psi;
    for (auto v : z.values) {
      phi.values.push_back(static_cast<std::uint32_t>(v / ny));
      psi.values.push_back(static_cast<std::uint32_t>(v % ny));
    }
    if (!std::binary_search(mx.members.begin(), mx.members.end(), phi) ||
        !std::binary_search(my.members.begin(), my.members.end(), psi))
      ++c.subset_violations;
  }
  // Map(rho, delta) x Map(rho', delta) subset of Map(rho x rho', 2 delta).
  for (const auto& phi : mx.members) {
    for (const auto& psi : my.members) {
      MapTuple z;
      for (std::size_t v = 0; v < phi.d(); ++v)
        z.values.push_back(static_cast<std::uint32_t>(phi.values[v] * ny + psi.values[v]));
      if (!std::binary_search(mp2.members.begin(), mp2.members.end(), z)) ++c.superset_violations;
    }
  }

  const double eps_ = eps;
  c.s_x = exact_count(x.space(), mx, eps_, kInfinity, CountKind::spanning, options, report, "S_x");
  c.s_y = exact_count(y.space(), my, eps_, kInfinity, CountKind::spanning, options, report, "S_y");
  c.s_prod = exact_count(prod.space(), mp1, eps_, kInfinity, CountKind::spanning, options, report, "S_prod_delta");
  c.n_x = exact_count(x.space(), mx, eps_, kInfinity, CountKind::separated, options, report, "N_x");
  c.n_y = exact_count(y.space(), my, eps_, kInfinity, CountKind::separated, options, report, "N_y");
  if (mp2.members.size() > options.mapspace.count_cap)
    throw InexactCount("product map space at 2 delta exceeds the exact counting cap");
  c.n_prod2 = exact_count(prod.space(), mp2, eps_, kInfinity, CountKind::separated, options, report,
                          "N_prod_2delta");
  return c;
}

std::string product_descriptor(const DynSystem& x, const DynSystem& y, const SoficApproximation& sigma,
                               const FolnerSet& F, double delta, double eps) {
  std::ostringstream s;
  s << "|X|=" << x.size() << " |Y|=" << y.size() << " d=" << sigma.d() << " |F|=" << F.size()
    << " delta=" << delta << " eps=" << eps;
  return s.str();
}

}  // namespace

VerificationReport verify_lemma51(const DynSystem& x, const DynSystem& y,
                                  const SoficApproximation& sigma, const FolnerSet& F, double delta,
                                  double eps, const VerifyOptions& options) {
  VerificationReport report;
  report.instance = product_descriptor(x, y, sigma, F, delta, eps);
  const ProductCounts c = product_counts(x, y, sigma, F, delta, eps, options, report);
  report.checks.push_back({"lemma51_map_prod_delta_in_product", dvalue(c.subset_violations), 0.0,
                           0.0 - dvalue(c.subset_violations), "violating tuples"});
  report.checks.push_back({"lemma51_product_in_map_prod_2delta", dvalue(c.superset_violations), 0.0,
                           0.0 - dvalue(c.superset_violations), "violating tuples"});
  const std::size_t s_rhs = c.s_x * c.s_y;
  report.checks.push_back({"lemma51_spanning_product", dvalue(c.s_prod), dvalue(s_rhs),
                           dvalue(s_rhs) - dvalue(c.s_prod), ""});
  const std::size_t n_rhs = c.n_x * c.n_y;
  report.checks.push_back({"lemma51_separated_product", dvalue(c.n_prod2), dvalue(n_rhs),
                           dvalue(c.n_prod2) - dvalue(n_rhs), ""});
  return report;
}

VerificationReport verify_thm52_stage(const DynSystem& x, const DynSystem& y,
                                      const SoficApproximation& sigma, const FolnerSet& F,
                                      double delta, double eps, const VerifyOptions& options) {
  VerificationReport report;
  report.instance = product_descriptor(x, y, sigma, F, delta, eps);
  const ProductCounts c = product_counts(x, y, sigma, F, delta, eps, options, report);
  const double d = dvalue(c.d);
  auto lg = [](std::size_t v) { return v == 0 ? -kInfinity : std::log(dvalue(v)); };

  // Logs of exact integer products, so equal counts give slack exactly 0.
  const std::size_t s_rhs = c.s_x * c.s_y;
  if (c.s_prod == 0) {
    report.checks.push_back({"thm52_upper_stage", -kInfinity, (lg(c.s_x) + lg(c.s_y)) / d, kInfinity,
                             "vacuous: empty product map space"});
  } else {
    report.checks.push_back({"thm52_upper_stage", lg(c.s_prod) / d, (lg(c.s_x) + lg(c.s_y)) / d,
                             (lg(s_rhs) - lg(c.s_prod)) / d, ""});
  }
  const std::size_t n_rhs = c.n_x * c.n_y;
  if (n_rhs == 0) {
    report.checks.push_back({"thm52_lower_stage", lg(c.n_prod2) / d, -kInfinity, kInfinity,
                             "vacuous: empty factor map space"});
  } else {
    report.checks.push_back({"thm52_lower_stage", lg(c.n_prod2) / d, (lg(c.n_x) + lg(c.n_y)) / d,
                             (lg(c.n_prod2) - lg(n_rhs)) / d, ""});
  }
  return report;
}

double max_boundary_fraction(const FolnerSet& Fn, const FolnerSet& F) {
  std::size_t worst = 0;
  for (const auto& s : F.elements()) worst = std::max(worst, boundary_count(Fn, s));
  return dvalue(worst) / dvalue(Fn.size());
}

VerificationReport verify_orbit_identity(const DynSystem& sys, const FolnerSet& Fn,
                                         const FolnerSet& F, double delta) {
  if (!sys.strict_action()) throw InvalidArgument("verify_orbit_identity: needs a strict action");
  VerificationReport report;
  {
    std::ostringstream s;
    s << "|X|=" << sys.size() << " |Fn|=" << Fn.size() << " |F|=" << F.size() << " delta=" << delta;
    report.instance = s.str();
  }
  const std::size_t n = sys.size();
  std::vector<MapTuple> orbit(n);
  for (std::size_t x = 0; x < n; ++x) orbit[x].values = orbit_map(sys, Fn, x).values;

  const OrbitPseudometric rho_fn(sys, Fn, kInfinity);
  std::size_t mismatches = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (map_distance(sys.space(), orbit[x], orbit[y], kInfinity) != rho_fn(x, y)) ++mismatches;
  report.quantities.emplace_back("pairs", dvalue(n * n));
  report.checks.push_back({"orbit_distance_identity", dvalue(mismatches), 0.0, 0.0 - dvalue(mismatches),
                           "mismatching pairs"});

  const double diam = sys.space().diameter();
  const double bound = diam * std::sqrt(max_boundary_fraction(Fn, F));
  report.quantities.emplace_back("membership_bound", bound);

  const SoficApproximation sigma = build_folner_sofic(Fn, F.elements());
  const MapSpaceSpec spec{sys, sigma, F, delta};
  double worst = 0.0;
  std::size_t members = 0;
  for (const auto& phi : orbit) {
    const Membership m = is_member(spec, phi);
    worst = std::max(worst, m.residual);
    members += m.member ? 1 : 0;
  }
  report.quantities.emplace_back("max_orbit_residual", worst);
  report.quantities.emplace_back("orbit_members", dvalue(members));
  if (bound <= delta) {
    report.checks.push_back({"orbit_membership", worst, delta, delta - worst,
                             "sqrt boundary bound applies"});
  }
  return report;
}

std::vector<ProbeRow> probe_conjecture(const DynSystem& sys, std::span<const SoficApproximation> sigmas,
                                       std::span<const FolnerSet> F_grid,
                                       std::span<const double> delta_grid,
                                       std::span<const double> eps_grid, double p,
                                       double tail_fraction, SolveMode mode,
                                       const MapSpaceOptions& options) {
  std::vector<ProbeRow> rows;
  for (std::size_t f = 0; f < F_grid.size(); ++f) {
    for (double delta : delta_grid) {
      for (double eps : eps_grid) {
        ProbeRow row{f, delta, eps,
                     finite_stage_h(sys, sigmas, F_grid[f], delta, eps, p, tail_fraction, mode, options),
                     0.0};
        const double lo = row.series.liminf_proxy;
        const double hi = row.series.limsup_proxy;
        row.gap = (std::isinf(lo) && std::isinf(hi) && lo < 0 && hi < 0) ? 0.0 : hi - lo;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace sofmdim
