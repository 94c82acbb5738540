#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sofmdim {

/// Read-only access to a pseudometric on the points 0..size()-1.
///
/// The counting solvers only ever ask for pairwise distances, so large
/// derived spaces (orbit pseudometrics, map spaces) implement this directly
/// instead of materializing an n x n table.
class Pseudometric {
 public:
  virtual ~Pseudometric() = default;
  virtual std::size_t size() const = 0;
  virtual double operator()(std::size_t i, std::size_t j) const = 0;
};

/// Finite pseudometric space stored as a pullback: every point carries a
/// label into a k x k base table, and dist(i, j) = base[label(i)][label(j)].
/// A plain table is the case k = n with the identity labelling. Shifts and
/// products whose distance only reads a few coordinates stay small this way.
class FinitePseudometricSpace final : public Pseudometric {
 public:
  /// Single point.
  FinitePseudometricSpace();

  /// Row-major n x n table. Throws InvalidArgument if not square or empty.
  /// No metric axioms are enforced here; see validate_space.
  explicit FinitePseudometricSpace(const std::vector<std::vector<double>>& table);

  /// n points, base table of size k x k, labels in [0, k).
  FinitePseudometricSpace(std::vector<std::uint32_t> labels, std::size_t base_size,
                          std::vector<double> base);

  /// Points on the real line with absolute-difference distance.
  static FinitePseudometricSpace line(std::span<const double> coords);

  /// Every point of a discrete space at distance `value` from every other.
  static FinitePseudometricSpace uniform(std::size_t n, double value);

  std::size_t size() const override { return labels_.size(); }
  double operator()(std::size_t i, std::size_t j) const override {
    return base_[labels_[i] * base_size_ + labels_[j]];
  }

  std::size_t base_size() const noexcept { return base_size_; }
  std::uint32_t label(std::size_t i) const { return labels_[i]; }
  double base_distance(std::size_t a, std::size_t b) const { return base_[a * base_size_ + b]; }

  double diameter() const;

  /// Full n x n table; only sensible for small n.
  std::vector<std::vector<double>> table() const;

  /// Snapshot of any pseudometric into a plain table.
  static FinitePseudometricSpace materialize(const Pseudometric& metric);

 private:
  std::vector<std::uint32_t> labels_;
  std::size_t base_size_ = 1;
  std::vector<double> base_;
};

double diameter(const Pseudometric& metric);

/// Human-readable descriptions of every violated pseudometric axiom;
/// empty iff the space is a pseudometric (triangle within `tolerance`).
std::vector<std::string> validate_space(const FinitePseudometricSpace& space,
                                        double tolerance = 1e-12);

enum class Exactness { exact, lower_bound, upper_bound };
enum class SolveMode { exact, greedy };

const char* to_string(Exactness e);
const char* to_string(SolveMode m);

struct CountResult {
  std::size_t value = 0;
  Exactness exactness = Exactness::exact;
  /// Point indices realizing the value: the separated set, the spanning
  /// centers, or one representative per block of a mesh cover.
  std::vector<std::size_t> witness;
  /// Blocks of a mesh cover; empty for the other counts.
  std::vector<std::vector<std::size_t>> blocks;
};

struct SolverOptions {
  /// Largest connected component of the threshold graph handed to the exact
  /// branch-and-bound. Isolated points and small components never count
  /// against it.
  std::size_t max_exact_points = 24;
  /// Hard cap on branch-and-bound nodes per solve.
  std::uint64_t node_budget = 20'000'000;
};

/// Largest (rho, eps)-separated subset of `subset`: distinct members pairwise
/// at distance >= eps. Greedy mode returns a maximal such set (lower bound).
CountResult separated_number(const Pseudometric& metric, std::span<const std::size_t> subset,
                             double eps, SolveMode mode, const SolverOptions& options = {});
CountResult separated_number(const Pseudometric& metric, double eps, SolveMode mode,
                             const SolverOptions& options = {});

/// Smallest (rho, eps)-spanning subset of `subset`: every member within
/// distance < eps of a chosen center. Greedy mode is an upper bound.
CountResult spanning_number(const Pseudometric& metric, std::span<const std::size_t> subset,
                            double eps, SolveMode mode, const SolverOptions& options = {});
CountResult spanning_number(const Pseudometric& metric, double eps, SolveMode mode,
                            const SolverOptions& options = {});

/// Fewest blocks of diameter < eps covering the whole space.
CountResult cover_number_mesh(const Pseudometric& metric, double eps,
                              SolveMode mode = SolveMode::exact,
                              const SolverOptions& options = {});

/// Fewest closed balls of the given radius, centered at points, covering
/// the whole space.
CountResult closed_ball_cover(const Pseudometric& metric, double radius,
                              SolveMode mode = SolveMode::exact,
                              const SolverOptions& options = {});

}  // namespace sofmdim
