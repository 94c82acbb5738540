#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "sofmdim/errors.hpp"
#include "sofmdim/instances.hpp"
#include "sofmdim/theorems.hpp"

using namespace sofmdim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const GroupModel Z = GroupModel::integers();

VerifyOptions wide() {
  VerifyOptions o;
  o.mapspace.solver.max_exact_points = 4096;
  return o;
}

MapSpaceSpec binary_spec(std::size_t d, double delta) {
  SoficApproximation s(Z, d);
  s.set(Z.integer(1), Permutation::identity(d));
  return {DynSystem(FinitePseudometricSpace({{0, 1}, {1, 0}}), Z, {{0, 1}}, true), s,
          FolnerSet(Z, {Z.integer(1)}), delta};
}

DynSystem one_point() { return DynSystem(FinitePseudometricSpace(), Z, {{0}}, true); }

DynSystem binary_shift(std::size_t period) {
  const std::array<double, 2> a{0.0, 1.0};
  return make_periodic_shift(FinitePseudometricSpace::line(a), period);
}

// Binomial coefficient by Pascal's triangle in long double.
long double pascal(std::size_t n, std::size_t k) {
  std::vector<long double> row{1.0L};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<long double> next(row.size() + 1, 0.0L);
    for (std::size_t j = 0; j < row.size(); ++j) {
      next[j] += row[j];
      next[j + 1] += row[j];
    }
    row = std::move(next);
  }
  return k <= n ? row[k] : 0.0L;
}

}  // namespace

TEST(BallCover, Examples) {
  const std::array<double, 3> xs{0.0, 0.5, 1.0};
  const auto line = FinitePseudometricSpace::line(xs);
  EXPECT_EQ(ball_cover_count(line, 1.0), 1u);
  EXPECT_EQ(ball_cover_count(line, 0.25), 3u);
  EXPECT_EQ(ball_cover_count(FinitePseudometricSpace({{0, 0}, {0, 0}}), 0.1), 1u);
}

TEST(Binomial, MatchesPascal) {
  for (std::size_t n = 0; n <= 64; ++n)
    for (std::size_t k = 0; k <= n; ++k) EXPECT_EQ(binomial(n, k), pascal(n, k)) << n << " " << k;
}

TEST(Prop32Constants, SpotValueAgainstNewtonOracle) {
  const auto k = compute_prop32_constants(2.0, 4, 1.0, 0.5);
  const double c_h = oracle::entropy_root(std::log(2.0) / 2.0);
  const double oracle_c = std::min({c_h, std::log(2.0) / (2.0 * std::log(4.0)), 0.49});
  EXPECT_NEAR(k.c, 0.110, 0.005);
  EXPECT_NEAR(k.c, oracle_c, 1e-9);
  EXPECT_NEAR(k.eps_prime, 0.0275, 0.005 * 0.5 / 2.0);
  EXPECT_DOUBLE_EQ(k.eps_prime, k.c * 0.5 / 2.0);
  EXPECT_TRUE(check_constants(k).empty());
}

TEST(Prop32Constants, CapApplies) {
  const auto k = compute_prop32_constants(4.0, 2, 1.0, 1.0);
  EXPECT_EQ(k.c, 0.49);
  EXPECT_TRUE(check_constants(k).empty());
}

TEST(Prop32Constants, ExponentTwoTakesSquareRoot) {
  const auto k = compute_prop32_constants(2.0, 3, 2.0, 0.8);
  EXPECT_DOUBLE_EQ(k.eps_prime, std::sqrt(k.c) * 0.8 / 2.0);
  const auto inf = compute_prop32_constants(2.0, 3, kInf, 0.8);
  EXPECT_DOUBLE_EQ(inf.eps_prime, 0.4);
}

TEST(Prop32Constants, InvariantsOverGrid) {
  for (double lambda : {1.01, 1.1, 1.5, 2.0, 3.0, 4.0, 10.0})
    for (std::size_t M : {1, 2, 3, 4, 7, 16, 100})
      for (double p : {1.0, 2.0, 5.0}) {
        const auto k = compute_prop32_constants(lambda, M, p, 0.3);
        EXPECT_TRUE(check_constants(k).empty()) << lambda << " " << M;
        EXPECT_GT(k.c, 0.0);
        EXPECT_LT(k.c, 0.5);
        for (std::size_t d = 1; d <= 64; ++d)
          EXPECT_LE(pascal(d, static_cast<std::size_t>(std::floor(k.c * d))), std::pow(static_cast<long double>(lambda), d / 2.0L));
      }
  EXPECT_THROW(compute_prop32_constants(1.0, 2, 1.0, 0.5), InvalidArgument);
  EXPECT_THROW(compute_prop32_constants(2.0, 0, 1.0, 0.5), InvalidArgument);
}

TEST(Prop32Constants, CheckConstantsFlagsBrokenInvariants) {
  auto k = compute_prop32_constants(2.0, 4, 1.0, 0.5);
  k.eps_prime *= 2;
  EXPECT_FALSE(check_constants(k).empty());
  k = compute_prop32_constants(2.0, 4, 1.0, 0.5);
  k.c = 0.45;
  EXPECT_GE(check_constants(k).size(), 2u);
}

TEST(VerifyProp31, Examples) {
  SoficApproximation s(Z, 2);
  s.set(Z.integer(1), Permutation::identity(2));
  const MapSpaceSpec single{one_point(), s, FolnerSet(Z, {Z.integer(1)}), 0.0};
  const auto r1 = verify_prop31(single, 0.5, 1.0);
  EXPECT_EQ(r1.quantity("N_eps_rho_p"), 1.0);
  EXPECT_EQ(r1.quantity("N_eps_rho_inf"), 1.0);
  EXPECT_EQ(r1.checks.at(0).slack, 0.0);
  EXPECT_TRUE(r1.pass());

  const auto r = verify_prop31(binary_spec(3, 1.0), 1.0, 1.0);
  EXPECT_EQ(r.quantity("N_eps_rho_p"), 2.0);
  EXPECT_EQ(r.quantity("N_eps_rho_inf"), 8.0);
  EXPECT_EQ(r.checks.at(0).slack, 6.0);
  for (const auto& [name, e] : r.provenance) EXPECT_EQ(e, Exactness::exact) << name;
}

TEST(VerifyProp31, RefusesInexactCounts) {
  VerifyOptions opts;
  opts.mapspace.count_cap = 4;
  EXPECT_THROW(verify_prop31(binary_spec(3, 1.0), 1.0, 1.0, opts), InexactCount);
  opts = {};
  opts.mapspace.exhaustive_guard = 4;
  EXPECT_THROW(verify_prop31(binary_spec(3, 1.0), 1.0, 1.0, opts), GuardExceeded);
}

TEST(VerifyProp32, BinaryExample) {
  const auto r = verify_prop32(binary_spec(3, 1.0), 1.0, 1.0, 2.0);
  EXPECT_EQ(r.quantity("M"), 2.0);
  EXPECT_NEAR(r.quantity("c"), 0.110, 0.005);
  EXPECT_NEAR(r.quantity("eps_prime"), 0.055, 0.0025);
  EXPECT_EQ(r.quantity("N_eps_prime_rho_p"), 8.0);
  EXPECT_EQ(r.quantity("N_eps_rho_inf"), 8.0);
  EXPECT_NEAR(r.checks.back().slack, 3 * std::log(2.0), 1e-12);
  EXPECT_TRUE(r.pass());
  EXPECT_THROW(verify_prop32(binary_spec(3, 1.0), 1.0, kInf, 2.0), InvalidArgument);
}

TEST(VerifyProp32, SinglePoint) {
  SoficApproximation s(Z, 4);
  s.set(Z.integer(1), Permutation::identity(4));
  const auto r = verify_prop32({one_point(), s, FolnerSet(Z, {Z.integer(1)}), 0.0}, 0.5, 2.0, 1.5);
  EXPECT_NEAR(r.checks.back().slack, 4 * std::log(1.5), 1e-12);
}

TEST(VerifyProp3x, SeededFamilies) {
  MapFamily fam;
  auto opts = wide();
  opts.mapspace.solver.node_budget = 1'000'000;
  std::size_t guarded = 0;
  for (std::size_t i = 0; i < 40; ++i) {
    const auto in = make_map_instance(fam, 5150, i);
    try {
      EXPECT_TRUE(verify_prop31(in.spec, in.eps, in.p, opts).pass()) << i;
      EXPECT_TRUE(verify_prop32(in.spec, in.eps, in.p, in.lambda, opts).pass()) << i;
    } catch (const GuardExceeded&) {
      ++guarded;
    }
  }
  // A full 4^4 map space at eps = 0.6 is out of reach of the exact search.
  EXPECT_LE(guarded, 1u);
}

TEST(VerifyLemma51, LargeDeltaGivesFullProducts) {
  const auto x = binary_shift(1);
  const auto y = make_random_system(Z, 3, 8, MetricStyle::euclidean_embedding);
  const std::vector<Element> els{Z.integer(1)};
  const auto sigma = build_folner_sofic(FolnerSet::interval(0, 3), els);
  const auto r = verify_lemma51(x, y, sigma, FolnerSet(Z, els), 5.0, 0.3, wide());
  EXPECT_EQ(r.quantity("members_x"), 8.0);
  EXPECT_EQ(r.quantity("members_y"), 27.0);
  EXPECT_EQ(r.quantity("members_prod_delta"), 216.0);
  EXPECT_EQ(r.quantity("members_prod_2delta"), 216.0);
  EXPECT_TRUE(r.pass());
}

TEST(VerifyLemma51, SinglePointFactorCollapses) {
  const auto x = make_random_system(Z, 3, 21, MetricStyle::random_ultrametric);
  const std::vector<Element> els{Z.integer(1)};
  const auto sigma = build_folner_sofic(FolnerSet::interval(0, 3), els);
  // delta above the diameter keeps the delta and 2 delta map spaces equal.
  const auto r = verify_lemma51(x, one_point(), sigma, FolnerSet(Z, els), 5.0, 0.2);
  EXPECT_EQ(r.quantity("S_prod_delta"), r.quantity("S_x"));
  EXPECT_EQ(r.quantity("N_prod_2delta"), r.quantity("N_x"));
  EXPECT_EQ(r.quantity("members_prod_delta"), r.quantity("members_x"));
  for (const auto& c : r.checks) EXPECT_EQ(c.slack, 0.0) << c.name;

  const auto t = verify_thm52_stage(x, one_point(), sigma, FolnerSet(Z, els), 5.0, 0.2);
  for (const auto& c : t.checks) EXPECT_NEAR(c.slack, 0.0, 1e-15) << c.name;
}

TEST(VerifyThm52, EmptyProductIsVacuous) {
  // delta = 0 with a swap action on X and sigma = identity: no member on X,
  // so the product map space is empty too.
  SoficApproximation s(Z, 1);
  s.set(Z.integer(1), Permutation::identity(1));
  const DynSystem x(FinitePseudometricSpace({{0, 1}, {1, 0}}), Z, {{1, 0}}, true);
  const auto r = verify_thm52_stage(x, one_point(), s, FolnerSet(Z, {Z.integer(1)}), 0.0, 0.5);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.checks[0].slack, kInf);
  EXPECT_NE(r.checks[0].note.find("vacuous"), std::string::npos);
}

TEST(VerifyLemma51, SeededFamily) {
  ProductFamily fam;
  VerifyOptions opts;
  opts.mapspace.solver.max_exact_points = 4096;
  for (std::size_t i = 0; i < 25; ++i) {
    const auto in = make_product_instance(fam, 606, i);
    EXPECT_TRUE(verify_lemma51(in.x, in.y, in.sigma, in.F, in.delta, in.eps, opts).pass()) << i;
    EXPECT_TRUE(verify_thm52_stage(in.x, in.y, in.sigma, in.F, in.delta, in.eps, opts).pass()) << i;
  }
}

TEST(OrbitIdentity, IdentityFolnerSet) {
  const auto sys = binary_shift(3);
  const FolnerSet id(Z, {Z.identity()});
  const auto r = verify_orbit_identity(sys, id, FolnerSet(Z, {Z.integer(1)}), 1.0);
  EXPECT_EQ(r.checks.at(0).lhs, 0.0);
}

TEST(OrbitIdentity, BinaryPeriodThree) {
  const auto sys = binary_shift(3);
  const auto r = verify_orbit_identity(sys, FolnerSet::interval(0, 3), FolnerSet(Z, {Z.integer(1)}), 0.6);
  EXPECT_EQ(r.quantity("pairs"), 64.0);
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.quantity("membership_bound"), std::sqrt(1.0 / 3.0), 1e-15);
  ASSERT_EQ(r.checks.size(), 2u);
  EXPECT_EQ(r.quantity("orbit_members"), 8.0);
}

TEST(OrbitIdentity, MembershipGuaranteedFromTwentyFive) {
  const auto sys = binary_shift(3);
  const FolnerSet F(Z, {Z.integer(1)});
  for (std::int64_t n = 20; n <= 30; ++n) {
    const auto Fn = FolnerSet::interval(0, n);
    EXPECT_EQ(std::sqrt(max_boundary_fraction(Fn, F)) <= 0.2, n >= 25);
    const auto r = verify_orbit_identity(sys, Fn, F, 0.2);
    EXPECT_TRUE(r.pass()) << n;
    if (n >= 25) EXPECT_EQ(r.quantity("orbit_members"), 8.0);
  }
}

TEST(OrbitIdentity, NeedsStrictAction) {
  const DynSystem loose(FinitePseudometricSpace({{0, 1}, {1, 0}}), Z, {{0, 0}}, false);
  EXPECT_THROW(verify_orbit_identity(loose, FolnerSet::interval(0, 2), FolnerSet(Z, {Z.integer(1)}), 1.0),
               InvalidArgument);
}

TEST(Probe, ConstantFamilyHasZeroGap) {
  const auto spec = binary_spec(3, 1.0);
  const std::vector<SoficApproximation> sigmas{spec.sigma, spec.sigma, spec.sigma};
  const std::vector<FolnerSet> Fs{spec.F};
  const std::vector<double> deltas{1.0}, eps{0.5, 1.0};
  const auto rows = probe_conjecture(spec.system, sigmas, Fs, deltas, eps, kInf, 1.0, SolveMode::exact);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) EXPECT_EQ(r.gap, 0.0);
}

TEST(Probe, EmptyCellsReportZeroGap) {
  SoficApproximation s(Z, 1);
  s.set(Z.integer(1), Permutation::identity(1));
  const DynSystem x(FinitePseudometricSpace({{0, 1}, {1, 0}}), Z, {{1, 0}}, true);
  const std::vector<SoficApproximation> sigmas{s};
  const std::vector<FolnerSet> Fs{FolnerSet(Z, {Z.integer(1)})};
  const std::vector<double> deltas{0.5}, eps{0.5};
  const auto rows = probe_conjecture(x, sigmas, Fs, deltas, eps, 2.0, 1.0, SolveMode::exact);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].series.liminf_proxy, -kInf);
  EXPECT_EQ(rows[0].series.limsup_proxy, -kInf);
  EXPECT_EQ(rows[0].gap, 0.0);
}

TEST(Reports, SelfValidating) {
  MapFamily fam;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto in = make_map_instance(fam, 9, i);
    const auto r = verify_prop31(in.spec, in.eps, in.p, wide());
    const double recomputed = r.quantity("N_eps_rho_inf") - r.quantity("N_eps_rho_p");
    EXPECT_EQ(r.checks.at(0).slack, recomputed);
    EXPECT_EQ(r.pass(), recomputed >= 0);
  }
}
