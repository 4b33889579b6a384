#include "tmodel/prohomotopy.hpp"

#include <algorithm>

namespace tmodel {

std::string to_string(HStarKind k) {
  switch (k) {
    case HStarKind::WeakEquivalence: return "WeakEquivalence";
    case HStarKind::NotWeakEquivalence: return "NotWeakEquivalence";
    default: return "Unknown";
  }
}

namespace {

struct Sum {
  ChainComplex complex;
  ChainMap in1;
};

// A ⊕ B with the inclusion of A.
Sum direct_sum(const ChainComplex& a, const ChainComplex& b) {
  const Ring& r = a.ring();
  int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  std::vector<std::size_t> ranks;
  std::map<int, Matrix> d, in;
  for (int n = lo; n <= hi; ++n) {
    ranks.push_back(a.rank(n) + b.rank(n));
    Matrix i(r, a.rank(n) + b.rank(n), a.rank(n));
    i.set_block(0, 0, Matrix::identity(r, a.rank(n)));
    in.emplace(n, i);
    if (n == lo) continue;
    Matrix m(r, a.rank(n - 1) + b.rank(n - 1), a.rank(n) + b.rank(n));
    m.set_block(0, 0, a.diff(n));
    m.set_block(a.rank(n - 1), a.rank(n), b.diff(n));
    d.emplace(n, m);
  }
  ChainComplex s(r, lo, ranks, d);
  return {s, ChainMap(a, s, in)};
}

std::size_t window_of(const ComplexProMap& f) {
  return std::max({f.source.tail_start(), f.target.tail_start(), f.window()});
}

// Lowest and highest degree in which any entry has a nonzero module.
std::pair<int, int> degree_window(const ComplexTower& y) {
  int lo = y.at(0).lo(), hi = y.at(0).hi();
  for (const auto& e : y.entries()) {
    lo = std::min(lo, e.lo());
    hi = std::max(hi, e.hi());
  }
  return {lo, hi};
}

}  // namespace

ChainMap truncation_step(const ChainComplex& x, int n) {
  Truncation a2 = truncate_above(x, n + 2), a1 = truncate_above(x, n + 1);
  return cone_map(a2.anchor, a1.anchor, factor_through_mono(a2.anchor, a1.anchor), ChainMap::identity(x));
}

std::pair<int, int> homology_window(const ComplexTower& x) {
  int lo = 0, hi = -1;
  bool any = false;
  for (const auto& e : x.entries()) {
    auto [a, b] = homology_support(e);
    if (a > b) continue;
    lo = any ? std::min(lo, a) : a;
    hi = any ? std::max(hi, b) : b;
    any = true;
  }
  return {lo, hi};
}

GroupTower homology_tower(const ComplexTower& x, int n) {
  std::vector<AbGroup> entries;
  std::vector<GroupHom> maps;
  for (std::size_t k = 0; k <= x.tail_start(); ++k) {
    entries.push_back(homology(x.at(k), n));
    if (k > 0) maps.push_back(induced_homology_map(x.map(k - 1), n));
  }
  std::optional<GroupHom> endo;
  if (x.endo()) endo = induced_homology_map(*x.endo(), n);
  return GroupTower(entries, maps, x.tail_kind(), endo);
}

GroupProMap homology_pro_map(const ComplexProMap& f0, int n) {
  ComplexProMap f = as_level_map(f0);
  std::vector<GroupHom> comps;
  for (std::size_t t = 0; t <= window_of(f); ++t) comps.push_back(induced_homology_map(f.comp(t), n));
  return GroupProMap::level(homology_tower(f.source, n), homology_tower(f.target, n), comps);
}

HStarVerdict is_hstar_weak_equivalence(const ComplexProMap& f0, std::size_t budget) {
  ComplexProMap f = as_level_map(f0);
  std::size_t w = window_of(f);
  HStarVerdict v{HStarKind::WeakEquivalence, "", std::nullopt, budget};

  // Clause 1. Components beyond w repeat, so the minimum over the window is uniform.
  int m = kPlusInfinity;
  for (std::size_t t = 0; t <= w; ++t) m = std::min(m, classify_map(f.comp(t)).max_n_equivalence);
  v.m_witness = m;

  auto [xa, xb] = homology_window(f.source);
  auto [ya, yb] = homology_window(f.target);
  int lo = std::min(xa, ya), hi = std::max(xb, yb);
  if (xa > xb) lo = ya, hi = yb;
  if (ya > yb) lo = xa, hi = xb;
  bool unknown = false;
  for (int n = lo; n <= hi; ++n) {
    ProIsoResult r = is_pro_isomorphism(homology_pro_map(f, n), budget);
    if (r.verdict == Verdict::False) {
      v.verdict = HStarKind::NotWeakEquivalence;
      v.reason = "H_" + std::to_string(n) + ": " + r.certificate;
      return v;
    }
    if (r.verdict == Verdict::Unknown && !unknown) {
      unknown = true;
      v.reason = "H_" + std::to_string(n) + ": no filler within budget";
    }
  }
  if (unknown) v.verdict = HStarKind::Unknown;
  return v;
}

Replacement postnikov_replacement(const ComplexTower& y) {
  auto [lo, hi] = degree_window(y);
  std::size_t big = std::max(y.tail_start(), static_cast<std::size_t>(std::max(0, hi - lo)));
  auto level = [&](std::size_t k) { return lo + static_cast<int>(k); };

  std::vector<ChainComplex> entries;
  std::vector<ChainMap> maps, comps;
  for (std::size_t k = 0; k <= big; ++k) {
    Truncation t = truncate_below_free(y.at(k), level(k));
    entries.push_back(t.complex);
    comps.push_back(t.anchor);
    if (k > 0)
      maps.push_back(compose(truncation_step(y.at(k - 1), level(k - 1)),
                             truncate_below_map(y.map(k - 1), level(k))));
  }
  std::optional<ChainMap> endo;
  if (y.endo()) endo = truncate_below_map(*y.endo(), level(big));
  ComplexTower z(entries, maps, y.tail_kind(), endo);
  return {z, ComplexProMap::level(y, z, comps)};
}

bool is_hstar_fibrant(const ComplexTower& y) {
  // Entries are bounded complexes, hence bounded above in homology.
  for (const auto& m : y.structure())
    if (!is_fibration(m)) return false;
  return !y.endo() || is_fibration(*y.endo());
}

Replacement make_fibrant(const ComplexTower& y) {
  if (y.tail_kind() == TailKind::RepeatFrom) {
    if (!is_hstar_fibrant(y)) throw PreconditionViolated("non-surjective repeating tail has no finite fibrant model");
    std::vector<ChainMap> comps;
    for (const auto& e : y.entries()) comps.push_back(ChainMap::identity(e));
    return {y, ComplexProMap::level(y, y, comps)};
  }
  std::vector<ChainComplex> entries{y.at(0)};
  std::vector<ChainMap> maps, comps{ChainMap::identity(y.at(0))};
  for (std::size_t s = 0; s < y.tail_start(); ++s) {
    const ChainComplex& prev = entries.back();
    Cone c = cone(ChainMap::identity(prev));
    ChainComplex disk = shift(c.complex, -1);
    ChainMap pi(disk, prev, shift(c.proj, -1).comps());
    Sum sum = direct_sum(y.at(s + 1), disk);
    std::map<int, Matrix> p;
    ChainMap down = compose(comps.back(), y.map(s));
    for (int n = sum.complex.lo(); n <= sum.complex.hi(); ++n)
      p.emplace(n, Matrix::hstack(down.comp(n), pi.comp(n)));
    maps.emplace_back(sum.complex, prev, p);
    entries.push_back(sum.complex);
    comps.push_back(sum.in1);
  }
  ComplexTower out(entries, maps, TailKind::ConstantFrom);
  return {out, ComplexProMap::level(y, out, comps)};
}

ProHomResult heart_hom(const ComplexTower& x, const ComplexTower& y, int n, std::size_t budget) {
  for (const auto& e : x.entries()) {
    auto [a, b] = homology_support(e);
    if (a <= b && a < n) throw WindowViolation("source entry has homology in degree " + std::to_string(a) + " < " + std::to_string(n));
  }
  for (const auto& e : y.entries()) {
    auto [a, b] = homology_support(e);
    if (a <= b && b > n) throw WindowViolation("target entry has homology in degree " + std::to_string(b) + " > " + std::to_string(n));
  }
  const ChainComplex& xs = x.at(x.tail_start());
  const ChainComplex& yt = y.at(y.tail_start());
  std::optional<GroupHom> pre, post;
  if (x.endo()) pre = induced_map_on_derived_hom(*x.endo(), ChainMap::identity(yt), 0);
  if (y.endo()) post = induced_map_on_derived_hom(ChainMap::identity(xs), *y.endo(), 0);
  return lim_colim_tail(derived_hom(xs, yt, 0), pre, post, budget);
}

ProHomResult hom_to_constant(const ComplexTower& x, const ChainComplex& y, int n) {
  const ChainComplex& xs = x.at(x.tail_start());
  std::optional<GroupHom> pre;
  if (x.endo()) pre = induced_map_on_derived_hom(*x.endo(), ChainMap::identity(y), n);
  return lim_colim_tail(derived_hom(xs, y, n), pre, std::nullopt, 0);
}

namespace {

GroupTower hom_tower(const ChainComplex& x, const ComplexTower& z, int n) {
  std::vector<AbGroup> entries;
  std::vector<GroupHom> maps;
  ChainMap id = ChainMap::identity(x);
  for (std::size_t k = 0; k <= z.tail_start(); ++k) {
    entries.push_back(derived_hom(x, z.at(k), n));
    if (k > 0) maps.push_back(induced_map_on_derived_hom(id, z.map(k - 1), n));
  }
  std::optional<GroupHom> endo;
  if (z.endo()) endo = induced_map_on_derived_hom(id, *z.endo(), n);
  return GroupTower(entries, maps, z.tail_kind(), endo);
}

}  // namespace

HomFromConstant hom_from_constant(const ChainComplex& x, const ComplexTower& y, int n, std::size_t budget) {
  ComplexTower z = postnikov_replacement(y).tower;
  GroupTower g = hom_tower(x, z, n);
  LimResult l = lim_lim1(g, budget);
  Lim1 obstruction = lim_lim1(hom_tower(x, z, n + 1), budget).lim1;
  std::optional<AbGroup> value;
  if (l.lim && obstruction == Lim1::Zero) value = l.lim;
  return {l, obstruction, value, g};
}

bool is_levelwise_cofibration(const ComplexProMap& f0) {
  ComplexProMap f = as_level_map(f0);
  for (std::size_t t = 0; t <= f.window(); ++t)
    if (!is_cofibration(f.comp(t))) return false;
  return true;
}

}  // namespace tmodel
