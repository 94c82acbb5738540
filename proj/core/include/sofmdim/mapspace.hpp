#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sofmdim/dynsys.hpp"
#include "sofmdim/group.hpp"
#include "sofmdim/metric_space.hpp"
#include "sofmdim/sofic.hpp"

namespace sofmdim {

/// A map [d] -> X as the sequence of point indices it takes.
struct MapTuple {
  std::vector<std::uint32_t> values;

  std::size_t d() const noexcept { return values.size(); }
  friend auto operator<=>(const MapTuple&, const MapTuple&) = default;
};

/// Data fixing one approximately-equivariant map space: the maps phi with
/// rho_2(phi o sigma_s, alpha_s o phi) <= delta for every s in F.
struct MapSpaceSpec {
  DynSystem system;
  SoficApproximation sigma;
  FolnerSet F;
  double delta;
};

/// Throws if sigma or the action is unusable on F, or delta is negative.
void validate(const MapSpaceSpec& spec);

/// rho_p(phi, psi) = (1/d sum_v rho(phi(v), psi(v))^p)^(1/p), max for p = inf.
double map_distance(const Pseudometric& space, const MapTuple& phi, const MapTuple& psi, double p);

struct Membership {
  bool member;
  /// max over s in F of the equivariance defect.
  double residual;
};

/// Membership under rho_2. `exponent` swaps in rho_q for exploratory runs;
/// no verification path uses anything but the default.
Membership is_member(const MapSpaceSpec& spec, const MapTuple& phi, double exponent = 2.0);

struct MapSpaceOptions {
  /// Largest |X|^d enumerated exhaustively.
  std::uint64_t exhaustive_guard = 1'000'000;
  /// Largest member set handed to the counting solvers; bigger sets are
  /// subsampled and the count becomes a bound.
  std::size_t count_cap = 4096;
  /// Member target for sample_mapspace when enumeration is out of reach.
  std::size_t sample_budget = 512;
  std::uint64_t seed = 0;
  double membership_exponent = 2.0;
  SolverOptions solver;
};

/// Every member, in lexicographic order. Throws GuardExceeded when |X|^d
/// exceeds the exhaustive guard.
std::vector<MapTuple> enumerate_mapspace(const MapSpaceSpec& spec, const MapSpaceOptions& options = {});

/// Duplicate-free members found by orbit-map seeding, rejection sampling
/// and single-coordinate descent; sorted, at most `budget` of them.
std::vector<MapTuple> sample_mapspace(const MapSpaceSpec& spec, std::uint64_t seed,
                                      std::size_t budget, const MapSpaceOptions& options = {});

/// rho_p between members of a map space, as a pseudometric on member
/// positions.
class MapSpaceMetric final : public Pseudometric {
 public:
  MapSpaceMetric(const FinitePseudometricSpace& space, const std::vector<MapTuple>& members, double p);
  std::size_t size() const override { return members_->size(); }
  double operator()(std::size_t i, std::size_t j) const override;

 private:
  const FinitePseudometricSpace* space_;
  const std::vector<MapTuple>* members_;
  double p_;
};

enum class CountKind { separated, spanning };
const char* to_string(CountKind k);

struct MemberSet {
  std::vector<MapTuple> members;
  /// True when `members` is the whole map space.
  bool complete = true;
};

/// Enumerate when within the guard, otherwise sample.
MemberSet obtain_members(const MapSpaceSpec& spec, const MapSpaceOptions& options = {});

/// N_eps or S_eps of a member set under rho_p. Incomplete member sets give
/// lower bounds only (spanning: via N_{2 eps} <= S_eps).
CountResult count_members(const FinitePseudometricSpace& space, const MemberSet& set, double eps,
                          double p, CountKind which, SolveMode mode,
                          const MapSpaceOptions& options = {});

CountResult mapspace_count(const MapSpaceSpec& spec, double eps, double p, CountKind which,
                           SolveMode mode, const MapSpaceOptions& options = {});

struct Stage {
  std::size_t index;
  std::size_t d;
  std::size_t count;
  Exactness exactness;
  /// (1/d) log count, natural log; -inf when the map space is empty.
  double value;
};

/// Per-stage values with min/max over the final stages standing in for
/// liminf/limsup.
struct StageSeries {
  std::vector<Stage> stages;
  std::size_t tail_size = 0;
  double liminf_proxy = 0.0;
  double limsup_proxy = 0.0;
};

/// Fill the proxies from the last ceil(tail_fraction * #stages) stages.
void summarize(StageSeries& series, double tail_fraction);

StageSeries finite_stage_h(const DynSystem& sys, std::span<const SoficApproximation> sigmas,
                           const FolnerSet& F, double delta, double eps, double p,
                           double tail_fraction, SolveMode mode = SolveMode::exact,
                           const MapSpaceOptions& options = {});

struct AmenableSeries {
  StageSeries series;
  /// value / |log eps| per stage.
  std::vector<double> ratios;
};

AmenableSeries amenable_finite_stage(const DynSystem& sys, std::span<const FolnerSet> Fns,
                                     double eps, double p, double tail_fraction = 1.0,
                                     SolveMode mode = SolveMode::exact,
                                     const SolverOptions& solver = {});

/// |log eps| with the natural log.
double abs_log(double eps);

}  // namespace sofmdim
