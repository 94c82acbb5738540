#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

namespace {

bool pairwise_far(const Table& t, std::uint32_t mask, double eps) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(mask >> i & 1U)) continue;
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if ((mask >> j & 1U) && t[i][j] < eps) return false;
  }
  return true;
}

// Smallest number of sets from `sets` whose union is `all`, by trying
// k = 1, 2, ... over combinations.
std::size_t min_cover(const std::vector<std::uint32_t>& sets, std::uint32_t all) {
  if (all == 0) return 0;
  const std::size_t m = sets.size();
  for (std::size_t k = 1; k <= m; ++k) {
    std::vector<std::size_t> idx(k);
    std::function<bool(std::size_t, std::size_t, std::uint32_t)> rec =
        [&](std::size_t pos, std::size_t start, std::uint32_t acc) {
          if (pos == k) return acc == all;
          for (std::size_t s = start; s < m; ++s)
            if (rec(pos + 1, s + 1, acc | sets[s])) return true;
          return false;
        };
    if (rec(0, 0, 0)) return k;
  }
  throw std::logic_error("oracle::min_cover: no cover");
}

}  // namespace

std::size_t separated(const Table& t, double eps) {
  const std::size_t n = t.size();
  if (n > 20) throw std::invalid_argument("oracle::separated: n too large");
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    const auto c = static_cast<std::size_t>(__builtin_popcount(mask));
    if (c > best && pairwise_far(t, mask, eps)) best = c;
  }
  return best;
}

std::size_t spanning(const Table& t, double eps) {
  const std::size_t n = t.size();
  std::vector<std::uint32_t> balls(n, 0);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t x = 0; x < n; ++x)
      if (t[c][x] < eps) balls[c] |= 1U << x;
  return min_cover(balls, n == 32 ? ~0U : (1U << n) - 1);
}

std::size_t closed_cover(const Table& t, double r) {
  const std::size_t n = t.size();
  std::vector<std::uint32_t> balls(n, 0);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t x = 0; x < n; ++x)
      if (t[c][x] <= r) balls[c] |= 1U << x;
  return min_cover(balls, (1U << n) - 1);
}

std::size_t mesh_cover(const Table& t, double eps) {
  const std::size_t n = t.size();
  if (n > 12) throw std::invalid_argument("oracle::mesh_cover: n too large");
  std::vector<std::uint32_t> blocks;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        if ((mask >> i & 1U) && (mask >> j & 1U) && !(t[i][j] < eps)) ok = false;
    if (ok) blocks.push_back(mask);
  }
  // Only inclusion-maximal blocks matter.
  std::vector<std::uint32_t> maximal;
  for (auto b : blocks) {
    bool dominated = false;
    for (auto c : blocks)
      if (c != b && (b & c) == b) dominated = true;
    if (!dominated) maximal.push_back(b);
  }
  return min_cover(maximal, (1U << n) - 1);
}

double power_mean(const std::vector<double>& xs, double p) {
  if (std::isinf(p)) return *std::max_element(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += std::pow(x, p);
  return std::pow(s / static_cast<double>(xs.size()), 1.0 / p);
}

double entropy_root(double target) {
  double c = 1e-3;
  for (int it = 0; it < 200; ++it) {
    const double h = -c * std::log(c) - (1 - c) * std::log(1 - c);
    const double dh = std::log((1 - c) / c);
    const double next = std::clamp(c - (h - target) / dh, 1e-12, 0.5 - 1e-12);
    if (std::abs(next - c) < 1e-16) break;
    c = next;
  }
  return c;
}

void for_each_tuple(std::size_t n, std::size_t d,
                    const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  std::vector<std::uint32_t> v(d, 0);
  if (n == 0) return;
  while (true) {
    visit(v);
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (++v[k] < n) break;
      v[k] = 0;
      if (k == 0) return;
    }
    if (d == 0) return;
  }
}

Table table_of(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist) {
  Table t(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = dist(i, j);
  return t;
}

}  // namespace oracle
