#include "sofmdim/instances.hpp"

#include <algorithm>
#include <numeric>

#include "sofmdim/errors.hpp"
#include "sofmdim/random.hpp"

namespace sofmdim {

namespace {

std::uint64_t ipow(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
    r *= base;
  }
  return r;
}

std::size_t fit_d(std::size_t d, std::uint64_t points, std::uint64_t max_tuples) {
  while (d > 1 && ipow(points, d) > max_tuples) --d;
  return d;
}

template <class T>
const T& pick_from(Rng& rng, const std::vector<T>& v, const char* what) {
  if (v.empty()) throw InvalidArgument(std::string("instance family: empty ") + what);
  return v[rng.below(v.size())];
}

std::vector<Element> random_F(Rng& rng, const GroupModel& g) {
  switch (rng.below(3)) {
    case 0: return {g.integer(1)};
    case 1: return {g.integer(2)};
    default: return {g.integer(1), g.integer(2)};
  }
}

MetricStyle random_style(Rng& rng) {
  return rng.coin(0.5) ? MetricStyle::euclidean_embedding : MetricStyle::random_ultrametric;
}

}  // namespace

SandwichInstance make_sandwich_instance(const SandwichFamily& family, std::uint64_t seed,
                                        std::size_t index) {
  if (family.min_points < 1 || family.max_points < family.min_points)
    throw InvalidArgument("sandwich family: bad point range");
  Rng rng = Rng::stream(seed, index);
  const auto n = static_cast<std::size_t>(
      rng.between(static_cast<std::int64_t>(family.min_points), static_cast<std::int64_t>(family.max_points)));
  FinitePseudometricSpace space = make_random_space(n, rng.next(), random_style(rng));

  std::vector<double> dists;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (space(i, j) > 0.0) dists.push_back(space(i, j));
  std::sort(dists.begin(), dists.end());
  dists.erase(std::unique(dists.begin(), dists.end()), dists.end());
  const double top = dists.empty() ? 1.0 : dists.back();

  std::vector<double> eps;
  for (std::size_t k = 0; k < family.eps_per_space; ++k) {
    const auto kind = dists.empty() ? 2 : rng.below(3);
    if (kind == 0) {
      eps.push_back(dists[rng.below(dists.size())]);
    } else if (kind == 1) {
      eps.push_back(dists[rng.below(dists.size())] / 2.0);
    } else {
      eps.push_back(top * (0.01 + 1.2 * rng.unit()));
    }
  }
  return {index, std::move(space), std::move(eps)};
}

SoficApproximation make_integer_sigma(std::size_t d, std::span<const Element> elements,
                                      bool random_images, std::uint64_t seed) {
  const GroupModel z = GroupModel::integers();
  if (!random_images)
    return build_folner_sofic(FolnerSet::interval(0, static_cast<std::int64_t>(d)), elements,
                              GammaPolicy::order_preserving, seed);
  SoficApproximation sigma(z, d);
  Rng rng(seed);
  for (const auto& g : elements) {
    if (z.is_identity(g)) continue;
    std::vector<std::uint32_t> images(d);
    std::iota(images.begin(), images.end(), 0u);
    rng.shuffle(images);
    sigma.set(g, Permutation(std::move(images)));
  }
  return sigma;
}

MapInstance make_map_instance(const MapFamily& family, std::uint64_t seed, std::size_t index) {
  Rng rng = Rng::stream(seed, index);
  const GroupModel z = GroupModel::integers();
  const auto n = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(family.max_points)));
  const auto d = fit_d(static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(family.max_d))), n,
                       family.max_tuples);
  const bool bijective = rng.coin(0.6);
  DynSystem sys = make_random_system(z, n, rng.next(), random_style(rng), bijective);
  std::vector<Element> f = random_F(rng, z);
  const bool random_images = rng.coin(0.5);
  SoficApproximation sigma = make_integer_sigma(d, f, random_images, rng.next());
  const double delta = pick_from(rng, family.delta_grid, "delta grid");
  const double eps = pick_from(rng, family.eps_grid, "eps grid");
  const double p = pick_from(rng, family.p_grid, "p grid");
  const double lambda = pick_from(rng, family.lambda_grid, "lambda grid");
  return {index, MapSpaceSpec{std::move(sys), std::move(sigma), FolnerSet(z, std::move(f)), delta},
          eps, p, lambda};
}

ProductInstance make_product_instance(const ProductFamily& family, std::uint64_t seed,
                                      std::size_t index) {
  Rng rng = Rng::stream(seed, index);
  const GroupModel z = GroupModel::integers();
  const auto nx = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(family.max_points)));
  const auto ny = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(family.max_points)));
  const auto d = fit_d(static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(family.max_d))),
                       nx * ny, family.max_tuples);
  const bool bijective = rng.coin(0.6);
  DynSystem x = make_random_system(z, nx, rng.next(), random_style(rng), bijective);
  DynSystem y = make_random_system(z, ny, rng.next(), random_style(rng), bijective);
  std::vector<Element> f = random_F(rng, z);
  const bool random_images = rng.coin(0.5);
  SoficApproximation sigma = make_integer_sigma(d, f, random_images, rng.next());
  const double delta = pick_from(rng, family.delta_grid, "delta grid");
  const double eps = pick_from(rng, family.eps_grid, "eps grid");
  return {index, std::move(x), std::move(y), std::move(sigma), FolnerSet(z, std::move(f)), delta, eps};
}

}  // namespace sofmdim
