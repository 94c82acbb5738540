#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sofmdim/dynsys.hpp"
#include "sofmdim/mapspace.hpp"

namespace sofmdim {

/// Constants for the rho_p -> rho_inf comparison at scale eps:
/// M closed eps/2-balls cover X, M^c <= lambda^(1/2),
/// binomial(d, floor(c d)) <= lambda^(d/2) for all d, eps' = c^(1/p) eps / 2.
struct Prop32Constants {
  double lambda;
  std::size_t M;
  double c;
  double p;
  double eps;
  double eps_prime;
  /// Largest d for which the binomial bound was checked directly.
  std::size_t checked_up_to;
};

/// Natural-log binary entropy.
double binary_entropy(double c);

/// Exact binomial coefficient for n <= 64 as long double.
long double binomial(std::size_t n, std::size_t k);

/// c = min(c_H, c_M, 0.49) with H(c_H) = (ln lambda)/2 and
/// c_M = ln lambda / (2 ln M); the binomial bound is then checked directly
/// for d <= max_d, shrinking c by 0.9 on failure (at most 10 times).
Prop32Constants compute_prop32_constants(double lambda, std::size_t M, double p, double eps,
                                         std::size_t max_d = 64);

/// Violations of the three invariants; empty when all hold.
std::vector<std::string> check_constants(const Prop32Constants& k);

/// Fewest closed balls of the given radius centered at points that cover
/// the space.
std::size_t ball_cover_count(const FinitePseudometricSpace& space, double radius,
                             const SolverOptions& solver = {});

/// One checked inequality, oriented so slack >= 0 means it holds.
struct InequalityCheck {
  std::string name;
  double lhs;
  double rhs;
  double slack;
  std::string note;

  bool pass() const { return slack >= 0.0; }
};

struct VerificationReport {
  std::string instance;
  std::vector<std::pair<std::string, double>> quantities;
  std::vector<std::pair<std::string, Exactness>> provenance;
  std::vector<InequalityCheck> checks;

  bool pass() const;
  double quantity(const std::string& name) const;
};

struct VerifyOptions {
  MapSpaceOptions mapspace;
};

/// N_eps(Map, rho_p) <= N_eps(Map, rho_inf). Needs an enumerable map space.
VerificationReport verify_prop31(const MapSpaceSpec& spec, double eps, double p,
                                 const VerifyOptions& options = {});

/// lambda^d N_eps'(Map, rho_p) >= N_eps(Map, rho_inf), with M from
/// ball_cover_count at radius eps/2.
VerificationReport verify_prop32(const MapSpaceSpec& spec, double eps, double p, double lambda,
                                 const VerifyOptions& options = {});

/// Product containments as literal subset relations plus the S and N
/// product inequalities at the given (delta, eps), rho_inf throughout.
VerificationReport verify_lemma51(const DynSystem& x, const DynSystem& y,
                                  const SoficApproximation& sigma, const FolnerSet& F,
                                  double delta, double eps, const VerifyOptions& options = {});

/// Stage-wise log form of the product inequalities.
VerificationReport verify_thm52_stage(const DynSystem& x, const DynSystem& y,
                                      const SoficApproximation& sigma, const FolnerSet& F,
                                      double delta, double eps, const VerifyOptions& options = {});

/// For a strict system and sigma built from Fn (order-preserving):
/// rho_inf(phi_x, phi_y) = rho_{Fn,inf}(x, y) on every pair, and orbit-map
/// membership whenever diam * sqrt(max_s |Fn \ s^-1 Fn| / |Fn|) <= delta.
VerificationReport verify_orbit_identity(const DynSystem& sys, const FolnerSet& Fn,
                                         const FolnerSet& F, double delta);

/// Largest |Fn \ s^-1 Fn| / |Fn| over s in F, as a double.
double max_boundary_fraction(const FolnerSet& Fn, const FolnerSet& F);

struct ProbeRow {
  std::size_t f_index;
  double delta;
  double eps;
  StageSeries series;
  /// limsup - liminf; 0 when both are -inf.
  double gap;
};

std::vector<ProbeRow> probe_conjecture(const DynSystem& sys,
                                       std::span<const SoficApproximation> sigmas,
                                       std::span<const FolnerSet> F_grid,
                                       std::span<const double> delta_grid,
                                       std::span<const double> eps_grid, double p,
                                       double tail_fraction, SolveMode mode,
                                       const MapSpaceOptions& options = {});

}  // namespace sofmdim
