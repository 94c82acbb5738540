#include "sofmdim/group.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "sofmdim/errors.hpp"

namespace sofmdim {

namespace {

std::int64_t parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  std::int64_t v = 0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InvalidArgument("group element: cannot parse integer '" + std::string(s) + "'");
  return v;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

GroupModel GroupModel::cyclic(std::int64_t m) {
  if (m < 1) throw InvalidArgument("cyclic group: modulus must be >= 1");
  return GroupModel(GroupKind::cyclic, m);
}

GroupModel GroupModel::from_name(std::string_view name) {
  if (name == "integers") return integers();
  if (name == "integer_pairs") return integer_pairs();
  if (name == "free_rank2") return free_rank2();
  if (name.starts_with("cyclic(") && name.ends_with(")"))
    return cyclic(parse_int(name.substr(7, name.size() - 8)));
  throw InvalidArgument("unknown group kind '" + std::string(name) + "'");
}

std::string GroupModel::name() const {
  switch (kind_) {
    case GroupKind::integers: return "integers";
    case GroupKind::integer_pairs: return "integer_pairs";
    case GroupKind::cyclic: return "cyclic(" + std::to_string(modulus_) + ")";
    case GroupKind::free_rank2: return "free_rank2";
  }
  return "?";
}

Element GroupModel::identity() const {
  switch (kind_) {
    case GroupKind::integers:
    case GroupKind::cyclic: return Element{{0}};
    case GroupKind::integer_pairs: return Element{{0, 0}};
    case GroupKind::free_rank2: return Element{};
  }
  return Element{};
}

void GroupModel::check(const Element& a) const {
  switch (kind_) {
    case GroupKind::integers:
      if (a.c.size() != 1) throw InvalidArgument("not an integer element");
      return;
    case GroupKind::integer_pairs:
      if (a.c.size() != 2) throw InvalidArgument("not an integer-pair element");
      return;
    case GroupKind::cyclic:
      if (a.c.size() != 1 || a.c[0] < 0 || a.c[0] >= modulus_)
        throw InvalidArgument("not a canonical residue mod " + std::to_string(modulus_));
      return;
    case GroupKind::free_rank2:
      for (std::size_t i = 0; i < a.c.size(); ++i) {
        const auto l = a.c[i];
        if (l != 1 && l != -1 && l != 2 && l != -2) throw InvalidArgument("bad free-group letter");
        if (i > 0 && a.c[i - 1] == -l) throw InvalidArgument("free-group word is not reduced");
      }
      return;
  }
}

Element GroupModel::multiply(const Element& a, const Element& b) const {
  switch (kind_) {
    case GroupKind::integers: return Element{{a.c[0] + b.c[0]}};
    case GroupKind::integer_pairs: return Element{{a.c[0] + b.c[0], a.c[1] + b.c[1]}};
    case GroupKind::cyclic: return Element{{mod(a.c[0] + b.c[0], modulus_)}};
    case GroupKind::free_rank2: {
      Element out = a;
      for (auto l : b.c) {
        if (!out.c.empty() && out.c.back() == -l)
          out.c.pop_back();
        else
          out.c.push_back(l);
      }
      return out;
    }
  }
  return Element{};
}

Element GroupModel::inverse(const Element& a) const {
  switch (kind_) {
    case GroupKind::integers: return Element{{-a.c[0]}};
    case GroupKind::integer_pairs: return Element{{-a.c[0], -a.c[1]}};
    case GroupKind::cyclic: return Element{{mod(-a.c[0], modulus_)}};
    case GroupKind::free_rank2: {
      Element out;
      for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) out.c.push_back(-*it);
      return out;
    }
  }
  return Element{};
}

Element GroupModel::integer(std::int64_t n) const {
  if (kind_ != GroupKind::integers) throw InvalidArgument("integer element in " + name());
  return Element{{n}};
}

Element GroupModel::pair(std::int64_t a, std::int64_t b) const {
  if (kind_ != GroupKind::integer_pairs) throw InvalidArgument("pair element in " + name());
  return Element{{a, b}};
}

Element GroupModel::residue(std::int64_t r) const {
  if (kind_ != GroupKind::cyclic) throw InvalidArgument("residue element in " + name());
  return Element{{mod(r, modulus_)}};
}

Element GroupModel::word(std::string_view letters) const {
  if (kind_ != GroupKind::free_rank2) throw InvalidArgument("word element in " + name());
  Element out;
  if (letters == "e") return out;
  for (char ch : letters) {
    std::int64_t l = 0;
    switch (ch) {
      case 'a': l = 1; break;
      case 'A': l = -1; break;
      case 'b': l = 2; break;
      case 'B': l = -2; break;
      default: throw InvalidArgument(std::string("bad free-group letter '") + ch + "'");
    }
    out = multiply(out, Element{{l}});
  }
  return out;
}

std::string GroupModel::format(const Element& a) const {
  switch (kind_) {
    case GroupKind::integers: return std::to_string(a.c[0]);
    case GroupKind::integer_pairs:
      return "(" + std::to_string(a.c[0]) + "," + std::to_string(a.c[1]) + ")";
    case GroupKind::cyclic: return std::to_string(a.c[0]) + " mod " + std::to_string(modulus_);
    case GroupKind::free_rank2: {
      if (a.c.empty()) return "e";
      std::string s;
      for (auto l : a.c) s += l == 1 ? 'a' : l == -1 ? 'A' : l == 2 ? 'b' : 'B';
      return s;
    }
  }
  return "?";
}

Element GroupModel::parse(std::string_view text) const {
  switch (kind_) {
    case GroupKind::integers: return Element{{parse_int(text)}};
    case GroupKind::integer_pairs: {
      if (text.size() < 5 || text.front() != '(' || text.back() != ')')
        throw InvalidArgument("cannot parse pair '" + std::string(text) + "'");
      const auto inner = text.substr(1, text.size() - 2);
      const auto comma = inner.find(',');
      if (comma == std::string_view::npos)
        throw InvalidArgument("cannot parse pair '" + std::string(text) + "'");
      return Element{{parse_int(inner.substr(0, comma)), parse_int(inner.substr(comma + 1))}};
    }
    case GroupKind::cyclic: {
      const auto at = text.find(" mod ");
      if (at == std::string_view::npos) return residue(parse_int(text));
      if (parse_int(text.substr(at + 5)) != modulus_)
        throw InvalidArgument("residue modulus mismatch in '" + std::string(text) + "'");
      return residue(parse_int(text.substr(0, at)));
    }
    case GroupKind::free_rank2: return word(text);
  }
  return Element{};
}

std::vector<std::string> GroupModel::generator_labels() const {
  std::vector<std::string> out;
  for (const auto& g : generators()) out.push_back(format(g));
  return out;
}

std::vector<Element> GroupModel::generators() const {
  switch (kind_) {
    case GroupKind::integers: return {Element{{1}}};
    case GroupKind::integer_pairs: return {Element{{1, 0}}, Element{{0, 1}}};
    case GroupKind::cyclic: return {residue(1)};
    case GroupKind::free_rank2: return {Element{{1}}, Element{{2}}};
  }
  return {};
}

std::vector<Letter> GroupModel::letters(const Element& a) const {
  check(a);
  std::vector<Letter> out;
  auto repeat = [&](std::size_t gen, std::int64_t n) {
    const int sign = n < 0 ? -1 : 1;
    for (std::int64_t k = 0; k < (n < 0 ? -n : n); ++k) out.push_back({gen, sign});
  };
  switch (kind_) {
    case GroupKind::integers: repeat(0, a.c[0]); break;
    case GroupKind::integer_pairs:
      repeat(0, a.c[0]);
      repeat(1, a.c[1]);
      break;
    case GroupKind::cyclic: repeat(0, a.c[0]); break;
    case GroupKind::free_rank2:
      for (auto l : a.c) out.push_back({static_cast<std::size_t>((l < 0 ? -l : l) - 1), l < 0 ? -1 : 1});
      break;
  }
  return out;
}

FolnerSet::FolnerSet(GroupModel group, std::vector<Element> elements)
    : group_(group), elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidArgument("FolnerSet: must be nonempty");
  sorted_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    group_.check(elements_[i]);
    sorted_.emplace_back(elements_[i], i);
  }
  std::sort(sorted_.begin(), sorted_.end());
  for (std::size_t i = 1; i < sorted_.size(); ++i)
    if (sorted_[i - 1].first == sorted_[i].first)
      throw InvalidArgument("FolnerSet: duplicate element " + group_.format(sorted_[i].first));
}

FolnerSet FolnerSet::interval(std::int64_t lo, std::int64_t hi) {
  std::vector<Element> e;
  for (std::int64_t k = lo; k < hi; ++k) e.push_back(Element{{k}});
  return FolnerSet(GroupModel::integers(), std::move(e));
}

FolnerSet FolnerSet::box(std::int64_t w, std::int64_t h) {
  std::vector<Element> e;
  for (std::int64_t y = 0; y < h; ++y)
    for (std::int64_t x = 0; x < w; ++x) e.push_back(Element{{x, y}});
  return FolnerSet(GroupModel::integer_pairs(), std::move(e));
}

FolnerSet FolnerSet::whole_cyclic(std::int64_t m) {
  const auto g = GroupModel::cyclic(m);
  std::vector<Element> e;
  for (std::int64_t r = 0; r < m; ++r) e.push_back(g.residue(r));
  return FolnerSet(g, std::move(e));
}

FolnerSet FolnerSet::ball(std::size_t r) {
  const auto g = GroupModel::free_rank2();
  std::vector<Element> all{g.identity()};
  std::vector<Element> layer{g.identity()};
  for (std::size_t k = 0; k < r; ++k) {
    std::vector<Element> next;
    for (const auto& w : layer)
      for (std::int64_t l : {1, -1, 2, -2})
        if (w.c.empty() || w.c.back() != -l) {
          Element x = w;
          x.c.push_back(l);
          next.push_back(std::move(x));
        }
    all.insert(all.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return FolnerSet(g, std::move(all));
}

std::size_t FolnerSet::index_of(const Element& g) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), g,
                             [](const auto& p, const Element& x) { return p.first < x; });
  if (it != sorted_.end() && it->first == g) return it->second;
  return size();
}

std::size_t boundary_count(const FolnerSet& F, const Element& g) {
  std::size_t out = 0;
  for (const auto& t : F.elements())
    if (!F.contains(F.group().multiply(g, t))) ++out;
  return out;
}

Fraction folner_defect(const FolnerSet& F, const Element& g) {
  // |F \ gF| = |F| - |F cap gF| = |F| - |{t in F : g t in F}| = |F \ g^{-1}F|.
  F.group().check(g);
  return Fraction(static_cast<std::int64_t>(boundary_count(F, g)),
                  static_cast<std::int64_t>(F.size()));
}

}  // namespace sofmdim
