#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sofmdim/group.hpp"
#include "sofmdim/metric_space.hpp"

namespace sofmdim {

/// Self-map of the point set as an image table.
using PointMap = std::vector<std::uint32_t>;

/// Finite space with a group acting through labelled generator maps.
///
/// With strict_action the generator maps are bijections satisfying the
/// group's relations, so g -> alpha_g is an honest action. Without it the
/// maps are arbitrary self-maps and only positive words can be evaluated.
class DynSystem {
 public:
  /// `generator_maps` follows group.generator_labels() order.
  DynSystem(FinitePseudometricSpace space, GroupModel group, std::vector<PointMap> generator_maps,
            bool strict_action);

  const FinitePseudometricSpace& space() const noexcept { return space_; }
  const GroupModel& group() const noexcept { return group_; }
  const std::vector<PointMap>& generator_maps() const noexcept { return maps_; }
  bool strict_action() const noexcept { return strict_; }
  std::size_t size() const noexcept { return space_.size(); }

  /// alpha_g as an image table. Throws UndefinedElement when g needs the
  /// inverse of a non-bijective generator map.
  PointMap action(const Element& g) const;

  /// Checks alpha_e = id and alpha_g alpha_h = alpha_gh over all elements of
  /// word length <= max_length; returns descriptions of failures.
  std::vector<std::string> check_action(std::size_t max_length) const;

 private:
  FinitePseudometricSpace space_;
  GroupModel group_;
  std::vector<PointMap> maps_;
  std::vector<PointMap> inverses_;  // empty entries when not bijective
  bool strict_;
};

/// Elements of word length <= r (used for action checks and F grids).
std::vector<Element> elements_up_to_length(const GroupModel& group, std::size_t r);

struct InstanceGuard {
  std::size_t max_points = 1'000'000;
};

/// Period-n points of the full shift over `alphabet`, acted on by the
/// integers through the cyclic left shift; rho reads coordinate 0. Point
/// index = sum x_k |A|^k.
DynSystem make_periodic_shift(const FinitePseudometricSpace& alphabet, std::size_t period,
                              InstanceGuard guard = {});

/// Periodic shift over {0, 1/m, ..., 1} with absolute-difference distance.
DynSystem make_grid_interval_shift(std::size_t m, std::size_t period, InstanceGuard guard = {});

/// Diagonal action on X x Y with the max metric; point (x, y) has index
/// x * |Y| + y.
DynSystem make_product(const DynSystem& x, const DynSystem& y, InstanceGuard guard = {});

enum class MetricStyle { euclidean_embedding, random_ultrametric };

/// Seeded random system. With `bijective` the generator maps realize an
/// honest action (commuting for integer pairs, order dividing m for
/// cyclic(m)); otherwise they are arbitrary self-maps and the system is
/// not strict.
DynSystem make_random_system(const GroupModel& group, std::size_t n_points, std::uint64_t seed,
                             MetricStyle style, bool bijective = true);

FinitePseudometricSpace make_random_space(std::size_t n_points, std::uint64_t seed,
                                          MetricStyle style);

/// rho_{F,p} over the whole point set, with the action tables for F
/// precomputed.
class OrbitPseudometric final : public Pseudometric {
 public:
  OrbitPseudometric(const DynSystem& sys, const FolnerSet& F, double p);

  std::size_t size() const override { return space_->size(); }
  double operator()(std::size_t x, std::size_t y) const override;

 private:
  const FinitePseudometricSpace* space_;
  std::vector<PointMap> tables_;
  double p_;
};

double orbit_pseudometric(const DynSystem& sys, const FolnerSet& F, double p, std::size_t x,
                          std::size_t y);

struct OrbitMap {
  std::size_t base_point;
  std::vector<Element> index_set;
  /// values[k] = alpha_{index_set[k]}(base_point)
  std::vector<std::uint32_t> values;
};

OrbitMap orbit_map(const DynSystem& sys, const FolnerSet& F, std::size_t x);

}  // namespace sofmdim
