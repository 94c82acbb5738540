#include "sofmdim/sofic.hpp"

#include <numeric>
#include <string>

#include "sofmdim/errors.hpp"
#include "sofmdim/random.hpp"

namespace sofmdim {

bool is_bijection(std::span<const std::uint32_t> images) {
  std::vector<bool> hit(images.size(), false);
  for (auto v : images) {
    if (v >= images.size() || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  if (!is_bijection(images_)) throw InvalidArgument("Permutation: image table is not a bijection");
}

Permutation Permutation::identity(std::size_t d) {
  std::vector<std::uint32_t> v(d);
  std::iota(v.begin(), v.end(), 0U);
  Permutation p;
  p.images_ = std::move(v);
  return p;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.images_.resize(images_.size());
  for (std::size_t v = 0; v < images_.size(); ++v)
    p.images_[images_[v]] = static_cast<std::uint32_t>(v);
  return p;
}

Permutation operator*(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) throw InvalidArgument("Permutation: size mismatch");
  Permutation p;
  p.images_.resize(inner.size());
  for (std::size_t v = 0; v < inner.size(); ++v) p.images_[v] = outer.images_[inner.images_[v]];
  return p;
}

bool Permutation::is_identity() const {
  for (std::size_t v = 0; v < images_.size(); ++v)
    if (images_[v] != v) return false;
  return true;
}

SoficApproximation::SoficApproximation(GroupModel group, std::size_t d) : group_(group), d_(d) {
  if (d == 0) throw InvalidArgument("SoficApproximation: d must be >= 1");
  table_.emplace(group_.identity(), Permutation::identity(d_));
}

void SoficApproximation::set(const Element& g, Permutation p) {
  group_.check(g);
  if (p.size() != d_) throw InvalidArgument("SoficApproximation: permutation has wrong size");
  if (group_.is_identity(g) && !p.is_identity())
    throw InvalidArgument("SoficApproximation: identity must map to the identity permutation");
  table_[g] = std::move(p);
}

void SoficApproximation::enable_word_extension() {
  if (group_.kind() != GroupKind::free_rank2)
    throw InvalidArgument("word extension is only sound for free groups");
  for (const auto& gen : group_.generators())
    if (!table_.contains(gen))
      throw InvalidArgument("word extension needs every free generator in the table");
  extend_by_words_ = true;
}

bool SoficApproximation::defined(const Element& g) const {
  return extend_by_words_ || table_.contains(g);
}

Permutation SoficApproximation::image(const Element& g) const {
  if (auto it = table_.find(g); it != table_.end()) return it->second;
  if (!extend_by_words_)
    throw UndefinedElement("sofic approximation undefined on " + group_.format(g));
  const auto gens = group_.generators();
  Permutation out = Permutation::identity(d_);
  for (const auto& l : group_.letters(g)) {
    const Permutation& p = table_.at(gens[l.generator]);
    out = out * (l.sign > 0 ? p : p.inverse());
  }
  return out;
}

void SoficApproximation::set_index_elements(std::vector<Element> e) {
  if (e.size() != d_) throw InvalidArgument("index elements must have length d");
  index_elements_ = std::move(e);
}

SoficApproximation build_folner_sofic(const FolnerSet& F, std::span<const Element> elements,
                                      GammaPolicy policy, std::uint64_t seed) {
  const GroupModel& G = F.group();
  const std::size_t d = F.size();
  SoficApproximation sigma(G, d);
  sigma.set_index_elements(F.elements());
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const Element& g = elements[k];
    G.check(g);
    std::vector<std::uint32_t> images(d, 0);
    std::vector<bool> hit(d, false);
    std::vector<std::uint32_t> leftover;  // F \ g^{-1}F in stored order
    for (std::size_t t = 0; t < d; ++t) {
      const std::size_t j = F.index_of(G.multiply(g, F[t]));
      if (j == d) {
        leftover.push_back(static_cast<std::uint32_t>(t));
      } else {
        images[t] = static_cast<std::uint32_t>(j);
        hit[j] = true;
      }
    }
    std::vector<std::uint32_t> missed;  // F \ gF in stored order
    for (std::size_t j = 0; j < d; ++j)
      if (!hit[j]) missed.push_back(static_cast<std::uint32_t>(j));
    if (missed.size() != leftover.size()) {
      throw InvalidArgument("build_folner_sofic: |F \\ g^-1 F| != |F \\ gF| for g = " +
                            G.format(g) + "; group model is corrupted");
    }
    if (policy == GammaPolicy::seeded_random) {
      Rng rng = Rng::stream(seed, k);
      rng.shuffle(missed);
    }
    for (std::size_t i = 0; i < leftover.size(); ++i) images[leftover[i]] = missed[i];
    sigma.set(g, Permutation(std::move(images)));
  }
  return sigma;
}

SoficApproximation build_random_sofic(const GroupModel& group, std::size_t d, std::uint64_t seed) {
  if (group.kind() != GroupKind::free_rank2)
    throw InvalidArgument("build_random_sofic: only the rank-2 free group is supported");
  SoficApproximation sigma(group, d);
  Rng rng(seed);
  for (const auto& gen : group.generators()) {
    std::vector<std::uint32_t> v(d);
    std::iota(v.begin(), v.end(), 0U);
    rng.shuffle(v);
    sigma.set(gen, Permutation(std::move(v)));
  }
  sigma.enable_word_extension();
  return sigma;
}

SoficDefects sofic_defects(const SoficApproximation& sigma, const Element& s, const Element& t) {
  const auto& G = sigma.group();
  const Permutation ps = sigma.image(s);
  const Permutation pt = sigma.image(t);
  const Permutation pst = sigma.image(G.multiply(s, t));
  std::int64_t mul = 0;
  std::int64_t agree = 0;
  for (std::size_t v = 0; v < sigma.d(); ++v) {
    if (ps(pt(v)) != pst(v)) ++mul;
    if (ps(v) == pt(v)) ++agree;
  }
  const auto d = static_cast<std::int64_t>(sigma.d());
  return {Fraction(mul, d), Fraction(agree, d)};
}

}  // namespace sofmdim
