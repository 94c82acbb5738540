#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sofmdim/fraction.hpp"

namespace sofmdim {

enum class GroupKind { integers, integer_pairs, cyclic, free_rank2 };

/// Canonical form of a group element. Integers: {n}; integer pairs: {a, b};
/// cyclic(m): {r} with 0 <= r < m; free group: reduced word with letters
/// a = 1, a^-1 = -1, b = 2, b^-1 = -2.
struct Element {
  std::vector<std::int64_t> c;

  friend auto operator<=>(const Element&, const Element&) = default;
};

/// One letter of a word in the labelled generators: generator index and
/// exponent sign (+1 or -1).
struct Letter {
  std::size_t generator;
  int sign;
};

class GroupModel {
 public:
  static GroupModel integers() { return GroupModel(GroupKind::integers, 0); }
  static GroupModel integer_pairs() { return GroupModel(GroupKind::integer_pairs, 0); }
  static GroupModel cyclic(std::int64_t m);
  static GroupModel free_rank2() { return GroupModel(GroupKind::free_rank2, 0); }

  /// "integers", "integer_pairs", "cyclic(12)", "free_rank2".
  static GroupModel from_name(std::string_view name);
  std::string name() const;

  GroupKind kind() const noexcept { return kind_; }
  std::int64_t modulus() const noexcept { return modulus_; }

  Element identity() const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  bool is_identity(const Element& a) const { return a == identity(); }

  /// Throws InvalidArgument if `a` is not in canonical form for this group.
  void check(const Element& a) const;

  Element integer(std::int64_t n) const;
  Element pair(std::int64_t a, std::int64_t b) const;
  Element residue(std::int64_t r) const;
  Element word(std::string_view letters) const;

  /// Canonical strings: "3", "(1,-2)", "5 mod 12", "abA" (uppercase =
  /// inverse, "e" for the empty word).
  std::string format(const Element& a) const;
  Element parse(std::string_view text) const;

  /// Labels of the generating set used by actions, in generator order:
  /// integers {"1"}, pairs {"(1,0)", "(0,1)"}, cyclic {"1 mod m"},
  /// free group {"a", "b"}.
  std::vector<std::string> generator_labels() const;
  std::vector<Element> generators() const;

  /// Word in the generators evaluating to `a`, read left to right as a
  /// product g = l1 l2 ... lk.
  std::vector<Letter> letters(const Element& a) const;

  /// Word length with respect to the generators.
  std::size_t length(const Element& a) const { return letters(a).size(); }

  friend bool operator==(const GroupModel&, const GroupModel&) = default;

 private:
  GroupModel(GroupKind kind, std::int64_t m) : kind_(kind), modulus_(m) {}

  GroupKind kind_;
  std::int64_t modulus_;
};

/// Finite ordered set of distinct group elements; the stored order
/// identifies it with {0, ..., |F|-1}.
class FolnerSet {
 public:
  FolnerSet(GroupModel group, std::vector<Element> elements);

  /// {lo, lo+1, ..., hi-1} in the integers.
  static FolnerSet interval(std::int64_t lo, std::int64_t hi);
  /// [0, w) x [0, h) in the integer pairs, row-major.
  static FolnerSet box(std::int64_t w, std::int64_t h);
  /// Every element of cyclic(m) in residue order.
  static FolnerSet whole_cyclic(std::int64_t m);
  /// Reduced words of length <= r in the free group (shortlex order).
  static FolnerSet ball(std::size_t r);

  const GroupModel& group() const noexcept { return group_; }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const Element& operator[](std::size_t i) const { return elements_[i]; }

  /// Position of `g` in the stored order, or size() if absent.
  std::size_t index_of(const Element& g) const;
  bool contains(const Element& g) const { return index_of(g) != size(); }

 private:
  GroupModel group_;
  std::vector<Element> elements_;
  std::vector<std::pair<Element, std::size_t>> sorted_;
};

/// |F \ gF| / |F|, exactly.
Fraction folner_defect(const FolnerSet& F, const Element& g);

/// |F \ g^{-1}F|, the number of t in F with g t outside F.
std::size_t boundary_count(const FolnerSet& F, const Element& g);

}  // namespace sofmdim
