#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sofmdim/fraction.hpp"
#include "sofmdim/group.hpp"

namespace sofmdim {

/// Permutation of {0, ..., d-1}, stored as its image table.
class Permutation {
 public:
  Permutation() = default;
  /// Throws InvalidArgument unless `images` is a bijection.
  explicit Permutation(std::vector<std::uint32_t> images);
  static Permutation identity(std::size_t d);

  std::size_t size() const noexcept { return images_.size(); }
  std::uint32_t operator()(std::size_t v) const { return images_[v]; }
  std::span<const std::uint32_t> images() const noexcept { return images_; }

  Permutation inverse() const;
  /// (outer * inner)(v) = outer(inner(v)).
  friend Permutation operator*(const Permutation& outer, const Permutation& inner);
  friend bool operator==(const Permutation&, const Permutation&) = default;

  bool is_identity() const;

 private:
  std::vector<std::uint32_t> images_;
};

bool is_bijection(std::span<const std::uint32_t> images);

enum class GammaPolicy { order_preserving, seeded_random };

/// Finite-support assignment g -> Sym(d). Out-of-support elements are an
/// error, except for free groups built from generator permutations, where
/// words extend by composition.
class SoficApproximation {
 public:
  SoficApproximation(GroupModel group, std::size_t d);

  const GroupModel& group() const noexcept { return group_; }
  std::size_t d() const noexcept { return d_; }

  /// Stores sigma(g). Storing the identity element is allowed only with
  /// the identity permutation.
  void set(const Element& g, Permutation p);

  /// Enable word-composition extension (free groups only).
  void enable_word_extension();
  bool word_extension() const noexcept { return extend_by_words_; }

  bool defined(const Element& g) const;
  /// sigma(g); throws UndefinedElement outside the support.
  Permutation image(const Element& g) const;

  const std::map<Element, Permutation>& table() const noexcept { return table_; }

  /// The group elements labelling [d] when this approximation came from a
  /// Folner set (position v <-> element v of the set).
  const std::optional<std::vector<Element>>& index_elements() const noexcept {
    return index_elements_;
  }
  void set_index_elements(std::vector<Element> e);

 private:
  GroupModel group_;
  std::size_t d_;
  std::map<Element, Permutation> table_;
  bool extend_by_words_ = false;
  std::optional<std::vector<Element>> index_elements_;
};

/// sigma_F(g)(t) = g t on F cap g^{-1}F, and a bijection
/// F \ g^{-1}F -> F \ gF elsewhere, chosen by `policy` relative to the
/// stored order of F. The identity is always included.
SoficApproximation build_folner_sofic(const FolnerSet& F, std::span<const Element> elements,
                                      GammaPolicy policy = GammaPolicy::order_preserving,
                                      std::uint64_t seed = 0);

/// Uniform random permutations for the free generators a and b; every
/// reduced word extends by composition.
SoficApproximation build_random_sofic(const GroupModel& group, std::size_t d, std::uint64_t seed);

struct SoficDefects {
  /// Fraction of v with sigma_s sigma_t (v) != sigma_st (v).
  Fraction mul_defect;
  /// Fraction of v with sigma_s (v) = sigma_t (v).
  Fraction dist_agreement;
};

SoficDefects sofic_defects(const SoficApproximation& sigma, const Element& s, const Element& t);

}  // namespace sofmdim
