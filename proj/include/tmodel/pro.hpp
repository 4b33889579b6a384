#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmodel/chain.hpp"
#include "tmodel/errors.hpp"

namespace tmodel {

inline GroupHom identity_map(const AbGroup& a) { return GroupHom::identity(a); }
inline ChainMap identity_map(const ChainComplex& x) { return ChainMap::identity(x); }

enum class TailKind { ConstantFrom, RepeatFrom };

/// ℕ-indexed inverse system T_0 <- T_1 <- ... presented by T_0..T_N and a tail:
/// ConstantFrom(N) repeats T_N with identity maps, RepeatFrom(N) repeats T_N with
/// a fixed endomorphism as every structure map from N on.
template <class Obj, class Map>
class Tower {
 public:
  Tower() = default;
  Tower(std::vector<Obj> entries, std::vector<Map> structure, TailKind kind, std::optional<Map> endo = {})
      : entries_(std::move(entries)), structure_(std::move(structure)), kind_(kind), endo_(std::move(endo)) {
    if (entries_.empty()) throw ShapeMismatch("tower needs at least one entry");
    if (structure_.size() + 1 != entries_.size()) throw ShapeMismatch("tower needs one structure map per step");
    if (kind_ == TailKind::RepeatFrom && !endo_) throw ShapeMismatch("repeat_from tail needs an endomorphism");
    if (kind_ == TailKind::ConstantFrom) endo_.reset();
  }
  static Tower constant(const Obj& x) { return Tower({x}, {}, TailKind::ConstantFrom); }
  static Tower repeating(const Obj& x, const Map& endo) { return Tower({x}, {}, TailKind::RepeatFrom, endo); }

  std::size_t tail_start() const { return entries_.size() - 1; }
  TailKind tail_kind() const { return kind_; }
  const std::vector<Obj>& entries() const { return entries_; }
  const std::vector<Map>& structure() const { return structure_; }
  const std::optional<Map>& endo() const { return endo_; }

  const Obj& at(std::size_t s) const { return entries_[std::min(s, tail_start())]; }
  /// Structure map T_{s+1} -> T_s.
  Map map(std::size_t s) const {
    if (s < tail_start()) return structure_[s];
    return kind_ == TailKind::ConstantFrom ? identity_map(entries_.back()) : *endo_;
  }
  /// T_s -> T_t for s >= t.
  Map compose_down(std::size_t s, std::size_t t) const {
    if (s < t) throw IndexOverflow("compose_down needs s >= t");
    Map m = identity_map(at(s));
    for (std::size_t k = s; k > t; --k) m = compose(map(k - 1), m);
    return m;
  }

 private:
  std::vector<Obj> entries_;
  std::vector<Map> structure_;
  TailKind kind_ = TailKind::ConstantFrom;
  std::optional<Map> endo_;
};

using GroupTower = Tower<AbGroup, GroupHom>;
using ComplexTower = Tower<ChainComplex, ChainMap>;

/// Germ representative of a pro-map X -> Y: components X_{θ(t)} -> Y_t for t <= W,
/// with θ(t) = θ(W) + slope (t - W) and the component constant beyond W.
template <class Obj, class Map>
struct ProMap {
  Tower<Obj, Map> source, target;
  std::vector<std::size_t> shift;
  std::size_t slope = 1;
  std::vector<Map> comps;

  static ProMap level(Tower<Obj, Map> x, Tower<Obj, Map> y, std::vector<Map> comps) {
    ProMap f{std::move(x), std::move(y), {}, 1, std::move(comps)};
    for (std::size_t t = 0; t < f.comps.size(); ++t) f.shift.push_back(t);
    return f;
  }
  std::size_t window() const { return comps.size() - 1; }
  std::size_t theta(std::size_t t) const {
    return t <= window() ? shift[t] : shift.back() + slope * (t - window());
  }
  const Map& comp(std::size_t t) const { return comps[std::min(t, window())]; }
  bool is_level() const {
    for (std::size_t t = 0; t < shift.size(); ++t)
      if (shift[t] != t) return false;
    return slope == 1;
  }
  /// Index from which all squares repeat.
  std::size_t stable_index() const {
    std::size_t t = std::max(window(), target.tail_start()) + 1;
    if (theta(t) < source.tail_start() && slope > 0)
      t += (source.tail_start() - theta(t) + slope - 1) / slope;
    return t;
  }
};

using GroupProMap = ProMap<AbGroup, GroupHom>;
using ComplexProMap = ProMap<ChainComplex, ChainMap>;

/// Compatibility squares commute exactly through the stable index.
template <class Obj, class Map>
bool validate(const ProMap<Obj, Map>& f) {
  if (f.comps.empty() || f.shift.size() != f.comps.size()) return false;
  for (std::size_t t = 0; t + 1 < f.shift.size(); ++t)
    if (f.shift[t + 1] < f.shift[t]) return false;
  for (std::size_t t = 0; t <= f.stable_index(); ++t) {
    Map lhs = compose(f.target.map(t), f.comp(t + 1));
    Map rhs = compose(f.comp(t), f.source.compose_down(f.theta(t + 1), f.theta(t)));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

/// g∘f with shift θ_f∘θ_g. Throws IndexOverflow when the tails cannot be reconciled.
template <class Obj, class Map>
ProMap<Obj, Map> compose(const ProMap<Obj, Map>& g, const ProMap<Obj, Map>& f) {
  std::size_t w = g.window();
  if (g.slope == 0 && g.theta(w) < f.window()) {
    // θ_g is eventually constant below f's window: components stay fixed anyway.
  } else if (g.theta(w) < f.window()) {
    if (g.slope == 0) throw IndexOverflow("incompatible tails");
    w += (f.window() - g.theta(w) + g.slope - 1) / g.slope;
  }
  ProMap<Obj, Map> h{f.source, g.target, {}, f.slope * g.slope, {}};
  for (std::size_t t = 0; t <= w; ++t) {
    std::size_t s = g.theta(t);
    h.shift.push_back(f.theta(s));
    h.comps.push_back(compose(g.comp(t), f.comp(s)));
  }
  return h;
}

enum class Verdict { True, False, Unknown };
std::string to_string(Verdict v);

struct Filler {
  std::size_t t, s;
  GroupHom g;  // Y_s -> X_t
};

struct ProIsoResult {
  Verdict verdict;
  std::vector<Filler> witness;  // one filler per level t <= stable index, when True
  std::string certificate;      // why False
  std::size_t budget;           // search budget used, reported on Unknown
};

/// Decides whether a map of group towers is a pro-isomorphism. True comes with
/// fillers g: Y_s -> X_t for every level; False with a non-pro-zero pro-kernel or
/// pro-cokernel; Unknown when fillers were not found within the budget.
ProIsoResult is_pro_isomorphism(const GroupProMap& f, std::size_t budget);

/// X̃_t = X_{θ(t)}, so that a shifted map out of X becomes a level map out of X̃.
template <class Obj, class Map>
Tower<Obj, Map> reindex_along(const Tower<Obj, Map>& x, const std::vector<std::size_t>& theta,
                              std::size_t slope) {
  if (theta.empty() || slope == 0) throw IndexOverflow("reindexing needs a cofinal shift");
  std::size_t w = theta.size() - 1;
  auto th = [&](std::size_t t) { return t <= w ? theta[t] : theta[w] + slope * (t - w); };
  std::size_t n = w;
  while (th(n) < x.tail_start()) ++n;
  std::vector<Obj> entries;
  std::vector<Map> maps;
  for (std::size_t t = 0; t <= n; ++t) {
    entries.push_back(x.at(th(t)));
    if (t > 0) maps.push_back(x.compose_down(th(t), th(t - 1)));
  }
  std::optional<Map> endo;
  if (x.tail_kind() == TailKind::RepeatFrom) endo = x.compose_down(th(n + 1), th(n));
  return Tower<Obj, Map>(entries, maps, x.tail_kind(), endo);
}

/// The same germ as a level map out of reindex_along(f.source, ...).
template <class Obj, class Map>
ProMap<Obj, Map> as_level_map(const ProMap<Obj, Map>& f) {
  if (f.is_level()) return f;
  if (f.slope == 0) throw IndexOverflow("pro-map shift is not cofinal");
  auto xt = reindex_along(f.source, f.shift, f.slope);
  std::size_t w = std::max(f.window(), xt.tail_start());
  std::vector<Map> comps;
  for (std::size_t t = 0; t <= w; ++t) comps.push_back(f.comp(t));
  return ProMap<Obj, Map>::level(xt, f.target, comps);
}

template <class Obj, class Map>
struct Reindexed {
  Tower<Obj, Map> tower;
  ProMap<Obj, Map> comparison;  // T -> T', θ(j) = jk, identity components
};

/// T'_j = T_{jk} with composed structure maps.
template <class Obj, class Map>
Reindexed<Obj, Map> reindex_cofinal(const Tower<Obj, Map>& t, std::size_t k) {
  if (k == 0) throw IndexOverflow("reindex step must be positive");
  std::size_t n2 = (t.tail_start() + k - 1) / k;
  std::vector<Obj> entries;
  std::vector<Map> structure;
  for (std::size_t j = 0; j <= n2; ++j) {
    entries.push_back(t.at(j * k));
    if (j > 0) structure.push_back(t.compose_down(j * k, (j - 1) * k));
  }
  std::optional<Map> endo;
  if (t.tail_kind() == TailKind::RepeatFrom) endo = t.compose_down(n2 * k + k, n2 * k);
  Tower<Obj, Map> out(entries, structure, t.tail_kind(), endo);
  ProMap<Obj, Map> cmp{t, out, {}, k, {}};
  for (std::size_t j = 0; j <= n2; ++j) {
    cmp.shift.push_back(j * k);
    cmp.comps.push_back(identity_map(t.at(j * k)));
  }
  return {out, cmp};
}

/// f'_j = f_{jk} between reindexed towers (level maps only).
template <class Obj, class Map>
ProMap<Obj, Map> reindex_level_map(const ProMap<Obj, Map>& f, std::size_t k) {
  auto x = reindex_cofinal(f.source, k).tower;
  auto y = reindex_cofinal(f.target, k).tower;
  std::size_t w = std::max({x.tail_start(), y.tail_start(), (f.window() + k - 1) / k});
  std::vector<Map> comps;
  for (std::size_t j = 0; j <= w; ++j) comps.push_back(f.comp(j * k));
  return ProMap<Obj, Map>::level(x, y, comps);
}

enum class Lim1 { Zero, NonzeroUncountable, Unknown };
std::string to_string(Lim1 v);

struct LimResult {
  std::optional<AbGroup> lim;  // nullopt: Unknown
  Lim1 lim1;
  bool mittag_leffler;
};

/// lim and lim¹ of a tower of finitely generated groups.
LimResult lim_lim1(const GroupTower& t, std::size_t budget);
/// The tail system A <-φ- A <-φ- ... alone.
LimResult lim_lim1_endo(const GroupHom& phi, std::size_t budget);

/// Direct system A_0 -> A_1 -> ... with the same tail conventions as towers.
struct DirectSystem {
  std::vector<AbGroup> entries;
  std::vector<GroupHom> maps;  // A_s -> A_{s+1}
  TailKind kind = TailKind::ConstantFrom;
  std::optional<GroupHom> endo;
};

struct ColimResult {
  std::optional<AbGroup> value;  // nullopt: Unknown (not finitely generated)
  /// Tail entry -> colimit; present whenever value is.
  std::optional<GroupHom> from_tail;
  /// Quotient description of the colimit inside the tail entry's coordinates.
  std::optional<Subquotient> quotient;
};

ColimResult colim(const DirectSystem& d);
/// colim(A -φ-> A -φ-> ...).
ColimResult colim_endo(const GroupHom& phi);
/// Map induced on colimits by an endomorphism m of the tail entry commuting with φ.
GroupHom induced_on_colim(const ColimResult& c, const GroupHom& m);

/// Pro-hom of group towers, lim_t colim_s Hom(X_s, Y_t).
struct ProHomResult {
  std::optional<AbGroup> value;
  std::string note;  // why Unknown
};
ProHomResult pro_hom(const GroupTower& x, const GroupTower& y, std::size_t budget);

/// lim_t colim_s G(s, t) for a bifunctor presented at the tails of X and Y.
/// group: G(N_X, N_Y); pre: endomorphism from X's tail structure map (nullopt:
/// constant); post: endomorphism from Y's tail structure map (nullopt: constant).
ProHomResult lim_colim_tail(const AbGroup& group, const std::optional<GroupHom>& pre,
                            const std::optional<GroupHom>& post, std::size_t budget);

/// True iff φ is nilpotent (decided with the exponent bound rank + Ω(torsion)).
bool is_nilpotent(const GroupHom& phi);
GroupHom power(const GroupHom& phi, std::size_t k);

}  // namespace tmodel
