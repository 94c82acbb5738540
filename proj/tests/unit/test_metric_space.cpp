#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "oracles.hpp"
#include "sofmdim/errors.hpp"
#include "sofmdim/dynsys.hpp"
#include "sofmdim/metric_space.hpp"
#include "sofmdim/random.hpp"

using namespace sofmdim;

namespace {

using Rows = std::vector<std::vector<double>>;

FinitePseudometricSpace line3() {
  const std::array<double, 3> xs{0.0, 0.5, 1.0};
  return FinitePseudometricSpace::line(xs);
}

bool has_message(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const auto& s) { return s.find(needle) != std::string::npos; });
}

FinitePseudometricSpace random_space(std::uint64_t seed, std::size_t max_n = 10) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_n)));
  return make_random_space(n, rng.next(),
                           rng.coin(0.5) ? MetricStyle::euclidean_embedding : MetricStyle::random_ultrametric);
}

std::vector<double> thresholds(const FinitePseudometricSpace& s) {
  std::vector<double> out{1e-3, 2.0};
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      out.push_back(s(i, j));
      out.push_back(s(i, j) / 2.0);
      out.push_back(s(i, j) * 1.01);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::vector<double> pos;
  for (double e : out)
    if (e > 0.0) pos.push_back(e);
  return pos;
}

}  // namespace

TEST(ValidateSpace, OnePointSpaceIsValid) {
  EXPECT_TRUE(validate_space(FinitePseudometricSpace(Rows{{0.0}})).empty());
}

TEST(ValidateSpace, ReportsAsymmetry) {
  const auto v = validate_space(FinitePseudometricSpace(Rows{{0.0, 1.0}, {2.0, 0.0}}));
  EXPECT_TRUE(has_message(v, "symmetry violation"));
}

TEST(ValidateSpace, ReportsTriangleViolation) {
  const auto v = validate_space(FinitePseudometricSpace(Rows{{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}));
  EXPECT_TRUE(has_message(v, "triangle violation at (0,1,2)"));
}

TEST(ValidateSpace, ReportsDiagonalAndNegativity) {
  EXPECT_TRUE(has_message(validate_space(FinitePseudometricSpace(Rows{{1.0}})), "diagonal"));
  EXPECT_TRUE(has_message(validate_space(FinitePseudometricSpace(Rows{{0.0, -1.0}, {-1.0, 0.0}})), "nonnegativity"));
}

TEST(ValidateSpace, AcceptsZeroDistanceBetweenDistinctPoints) {
  EXPECT_TRUE(validate_space(FinitePseudometricSpace(Rows{{0.0, 0.0}, {0.0, 0.0}})).empty());
}

TEST(ValidateSpace, RandomSpacesAreValid) {
  for (std::uint64_t s = 0; s < 100; ++s) EXPECT_TRUE(validate_space(random_space(s, 12)).empty()) << s;
}

TEST(SeparatedNumber, LineExample) {
  const auto r = separated_number(line3(), 0.5, SolveMode::exact);
  EXPECT_EQ(r.value, 3u);
  EXPECT_EQ(r.exactness, Exactness::exact);
}

TEST(SeparatedNumber, EpsAboveDiameterGivesOne) {
  EXPECT_EQ(separated_number(line3(), 1.5, SolveMode::exact).value, 1u);
}

TEST(SeparatedNumber, ZeroDistanceCollapse) {
  EXPECT_EQ(separated_number(FinitePseudometricSpace(Rows{{0, 0}, {0, 0}}), 0.1, SolveMode::exact).value, 1u);
}

TEST(SeparatedNumber, SubsetRestricts) {
  const std::array<std::size_t, 2> sub{0, 1};
  EXPECT_EQ(separated_number(line3(), sub, 0.5, SolveMode::exact).value, 2u);
  EXPECT_EQ(separated_number(line3(), sub, 0.6, SolveMode::exact).value, 1u);
}

TEST(SeparatedNumber, RejectsBadArguments) {
  EXPECT_THROW(separated_number(line3(), 0.0, SolveMode::exact), InvalidArgument);
  EXPECT_THROW(separated_number(line3(), std::span<const std::size_t>{}, 0.5, SolveMode::exact), InvalidArgument);
}

TEST(SeparatedNumber, GuardAppliesToComponents) {
  // 30 points pairwise at distance 0.01: one component of 30 > 24.
  const auto dense = FinitePseudometricSpace::uniform(30, 0.01);
  EXPECT_THROW(separated_number(dense, 0.5, SolveMode::exact), GuardExceeded);
  // 30 isolated points are fine.
  EXPECT_EQ(separated_number(FinitePseudometricSpace::uniform(30, 1.0), 0.5, SolveMode::exact).value, 30u);
}

TEST(SpanningNumber, LineExample) {
  const auto r = spanning_number(line3(), 0.6, SolveMode::exact);
  EXPECT_EQ(r.value, 1u);
  EXPECT_EQ(r.witness, std::vector<std::size_t>{1});
}

TEST(SpanningNumber, StrictInequalityExcludesCrossCover) {
  EXPECT_EQ(spanning_number(FinitePseudometricSpace(Rows{{0, 1}, {1, 0}}), 1.0, SolveMode::exact).value, 2u);
}

TEST(SpanningNumber, EpsAboveDiameterGivesOne) {
  EXPECT_EQ(spanning_number(line3(), 1.5, SolveMode::exact).value, 1u);
}

TEST(MeshCover, LineExample) {
  const auto r = cover_number_mesh(line3(), 0.6);
  EXPECT_EQ(r.value, 2u);
  ASSERT_EQ(r.blocks.size(), 2u);
}

TEST(MeshCover, TrivialCases) {
  EXPECT_EQ(cover_number_mesh(line3(), 1.5).value, 1u);
  EXPECT_EQ(cover_number_mesh(FinitePseudometricSpace(Rows{{0.0}}), 0.1).value, 1u);
}

TEST(ClosedBallCover, Examples) {
  EXPECT_EQ(closed_ball_cover(line3(), 1.0).value, 1u);
  EXPECT_EQ(closed_ball_cover(line3(), 0.25).value, 3u);
  EXPECT_EQ(closed_ball_cover(FinitePseudometricSpace(Rows{{0, 0}, {0, 0}}), 0.1).value, 1u);
}

TEST(Solvers, MatchBruteForceOracles) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto space = random_space(1000 + s, 9);
    const auto t = space.table();
    for (double eps : thresholds(space)) {
      ASSERT_EQ(separated_number(space, eps, SolveMode::exact).value, oracle::separated(t, eps)) << s << " " << eps;
      ASSERT_EQ(spanning_number(space, eps, SolveMode::exact).value, oracle::spanning(t, eps)) << s << " " << eps;
      ASSERT_EQ(cover_number_mesh(space, eps).value, oracle::mesh_cover(t, eps)) << s << " " << eps;
      ASSERT_EQ(closed_ball_cover(space, eps).value, oracle::closed_cover(t, eps)) << s << " " << eps;
    }
  }
}

TEST(Solvers, WitnessesSatisfyTheirDefinitions) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto space = random_space(2000 + s, 12);
    const std::size_t n = space.size();
    for (double eps : thresholds(space)) {
      for (auto mode : {SolveMode::exact, SolveMode::greedy}) {
        const auto sep = separated_number(space, eps, mode);
        ASSERT_EQ(sep.witness.size(), sep.value);
        for (auto a : sep.witness)
          for (auto b : sep.witness)
            if (a != b) ASSERT_GE(space(a, b), eps);
        const auto span = spanning_number(space, eps, mode);
        ASSERT_EQ(span.witness.size(), span.value);
        for (std::size_t x = 0; x < n; ++x)
          ASSERT_TRUE(std::any_of(span.witness.begin(), span.witness.end(),
                                  [&](std::size_t c) { return space(c, x) < eps; }));
        const auto mesh = cover_number_mesh(space, eps, mode);
        std::vector<bool> covered(n, false);
        for (const auto& block : mesh.blocks) {
          for (auto a : block) {
            covered[a] = true;
            for (auto b : block) ASSERT_LT(space(a, b), eps);
          }
        }
        ASSERT_TRUE(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }));
      }
    }
  }
}

TEST(Solvers, GreedyIsSound) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto space = random_space(3000 + s, 12);
    for (double eps : thresholds(space)) {
      const auto gs = separated_number(space, eps, SolveMode::greedy);
      const auto gc = spanning_number(space, eps, SolveMode::greedy);
      EXPECT_EQ(gs.exactness, Exactness::lower_bound);
      EXPECT_EQ(gc.exactness, Exactness::upper_bound);
      EXPECT_LE(gs.value, separated_number(space, eps, SolveMode::exact).value);
      EXPECT_GE(gc.value, spanning_number(space, eps, SolveMode::exact).value);
    }
  }
}

TEST(Solvers, SandwichMonotonicityAndMeshBracket) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto space = random_space(4000 + s, 12);
    const auto eps_list = thresholds(space);
    std::size_t prev_n = SIZE_MAX, prev_s = SIZE_MAX;
    for (double eps : eps_list) {
      const auto n = separated_number(space, eps, SolveMode::exact).value;
      const auto sp = spanning_number(space, eps, SolveMode::exact).value;
      const auto n2 = separated_number(space, 2 * eps, SolveMode::exact).value;
      EXPECT_LE(n2, sp);
      EXPECT_LE(sp, n);
      EXPECT_LE(n, prev_n);
      EXPECT_LE(sp, prev_s);
      prev_n = n;
      prev_s = sp;
      const auto mesh = cover_number_mesh(space, eps).value;
      EXPECT_LE(sp, mesh);
      EXPECT_LE(mesh, spanning_number(space, eps / 2, SolveMode::exact).value);
    }
  }
}

TEST(FinitePseudometricSpace, LabelledConstructionSharesBaseTable) {
  const FinitePseudometricSpace s({0, 1, 0, 1}, 2, {0.0, 0.7, 0.7, 0.0});
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s(0, 2), 0.0);
  EXPECT_EQ(s(0, 3), 0.7);
  EXPECT_DOUBLE_EQ(s.diameter(), 0.7);
}
