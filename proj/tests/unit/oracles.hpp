#pragma once

// Brute-force reference computations used as test oracles. They work on
// plain distance tables and never call into the library's solvers.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using Table = std::vector<std::vector<double>>;

/// Largest subset with all distinct pairs at distance >= eps (n <= 20).
std::size_t separated(const Table& t, double eps);
/// Smallest center set with every point at distance < eps from a center.
std::size_t spanning(const Table& t, double eps);
/// Fewest blocks of diameter < eps covering all points (n <= 12).
std::size_t mesh_cover(const Table& t, double eps);
/// Fewest closed balls of radius r centered at points covering all points.
std::size_t closed_cover(const Table& t, double r);

/// (1/d sum x^p)^(1/p), or max for p = inf, straight from the formula.
double power_mean(const std::vector<double>& xs, double p);

/// Natural-log binary entropy root of H(c) = target on (0, 1/2) by Newton
/// iteration from 1e-3 (independent of the library's bisection).
double entropy_root(double target);

/// Every tuple in [0, n)^d in lexicographic order, passed to `visit`.
void for_each_tuple(std::size_t n, std::size_t d,
                    const std::function<void(const std::vector<std::uint32_t>&)>& visit);

/// Distance table of a finite set of points under `dist`.
Table table_of(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist);

}  // namespace oracle
