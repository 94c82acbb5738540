#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sofmdim/dynsys.hpp"
#include "sofmdim/mapspace.hpp"

namespace sofmdim {

/// Seeded instance families for the verification suites. Instance `index`
/// under `seed` is a pure function of (family, seed, index).

struct SandwichFamily {
  std::size_t min_points = 1;
  std::size_t max_points = 12;
  std::size_t eps_per_space = 20;
};

struct SandwichInstance {
  std::size_t index;
  FinitePseudometricSpace space;
  /// Mix of pairwise distances, half distances and uniform draws.
  std::vector<double> eps;
};

SandwichInstance make_sandwich_instance(const SandwichFamily& family, std::uint64_t seed,
                                        std::size_t index);

struct MapFamily {
  std::size_t max_points = 4;
  std::size_t max_d = 5;
  /// d is lowered until |X|^d fits.
  std::uint64_t max_tuples = 1024;
  std::vector<double> delta_grid{0.0, 0.15, 0.35, 0.7, 1.5};
  std::vector<double> eps_grid{0.1, 0.3, 0.6, 1.0};
  std::vector<double> p_grid{1.0, 2.0, 5.0};
  std::vector<double> lambda_grid{1.5, 2.0, 4.0};
};

struct MapInstance {
  std::size_t index;
  MapSpaceSpec spec;
  double eps;
  double p;
  double lambda;
};

MapInstance make_map_instance(const MapFamily& family, std::uint64_t seed, std::size_t index);

struct ProductFamily {
  std::size_t max_points = 3;
  std::size_t max_d = 4;
  /// d is lowered until (|X| |Y|)^d fits.
  std::uint64_t max_tuples = 729;
  std::vector<double> delta_grid{0.0, 0.1, 0.25, 0.5, 1.5};
  std::vector<double> eps_grid{0.1, 0.3, 0.6, 1.0};
};

struct ProductInstance {
  std::size_t index;
  DynSystem x;
  DynSystem y;
  SoficApproximation sigma;
  FolnerSet F;
  double delta;
  double eps;
};

ProductInstance make_product_instance(const ProductFamily& family, std::uint64_t seed,
                                      std::size_t index);

/// sigma on the integers for the given F elements: the Folner-sofic
/// construction on [0, d) or, with `random_images`, an independent uniform
/// permutation for every non-identity element.
SoficApproximation make_integer_sigma(std::size_t d, std::span<const Element> elements,
                                      bool random_images, std::uint64_t seed);

}  // namespace sofmdim
