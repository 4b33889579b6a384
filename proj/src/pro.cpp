#include "tmodel/pro.hpp"

namespace tmodel {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "TRUE";
    case Verdict::False: return "FALSE";
    default: return "UNKNOWN";
  }
}

std::string to_string(Lim1 v) {
  switch (v) {
    case Lim1::Zero: return "Zero";
    case Lim1::NonzeroUncountable: return "NonzeroUncountable";
    default: return "Unknown";
  }
}

GroupHom power(const GroupHom& phi, std::size_t k) {
  GroupHom p = GroupHom::identity(phi.source());
  for (std::size_t i = 0; i < k; ++i) p = compose(phi, p);
  return p;
}

bool is_nilpotent(const GroupHom& phi) {
  // A strictly descending chain of images has length at most rank + log2|torsion|.
  const AbGroup& a = phi.source();
  std::size_t e = a.free_rank();
  for (const auto& d : a.torsion()) e += mpz_sizeinbase(d.get_mpz_t(), 2);
  return power(phi, e).is_zero();
}

namespace {

// Endomorphism of a subquotient of the canonical coordinates of phi's group.
GroupHom restrict_endo(const Subquotient& sq, const GroupHom& phi) {
  const AbGroup& g = sq.group();
  Matrix m(g.ring(), g.rank(), g.rank());
  Matrix images = phi.matrix() * sq.lifts();
  for (std::size_t j = 0; j < g.rank(); ++j) m.set_column(j, sq.coordinates(images.column(j)));
  return GroupHom(g, g, m);
}

// Smallest e with ker φ^e = ker φ^{e+1}; returns φ^e.
GroupHom stable_kernel_power(const GroupHom& phi) {
  const AbGroup& a = phi.source();
  GroupHom p = GroupHom::identity(a);
  Matrix k = kernel(p).map.matrix();
  for (;;) {
    GroupHom q = compose(phi, p);
    Matrix k2 = kernel(q).map.matrix();
    if (same_subgroup(a, k, k2)) return p;
    p = q;
    k = k2;
  }
}

}  // namespace

ProIsoResult is_pro_isomorphism(const GroupProMap& f0, std::size_t budget) {
  GroupProMap f = as_level_map(f0);
  const GroupTower& x = f.source;
  const GroupTower& y = f.target;
  std::size_t w = std::max({x.tail_start(), y.tail_start(), f.window()});
  GroupHom c = f.comp(w), phi = x.map(w), psi = y.map(w);

  ProIsoResult res{Verdict::Unknown, {}, "", budget};
  auto ker = kernel(c);
  if (!is_nilpotent(restrict_endo(ker.sq, phi))) {
    res.verdict = Verdict::False;
    res.certificate = "pro-kernel not pro-zero: tail kernel " + ker.sq.group().to_string() + " at level " +
                      std::to_string(w) + " carries a non-nilpotent structure map";
    return res;
  }
  auto cok = cokernel(c);
  if (!is_nilpotent(restrict_endo(cok.sq, psi))) {
    res.verdict = Verdict::False;
    res.certificate = "pro-cokernel not pro-zero: tail cokernel " + cok.sq.group().to_string() + " at level " +
                      std::to_string(w) + " carries a non-nilpotent structure map";
    return res;
  }

  for (std::size_t t = 0; t <= w; ++t) {
    bool found = false;
    for (std::size_t s = t; s <= w + budget && !found; ++s) {
      std::vector<HomConstraint> cs{{std::nullopt, f.comp(s), x.compose_down(s, t)},
                                    {f.comp(t), std::nullopt, y.compose_down(s, t)}};
      if (auto g = solve_hom_constraints(y.at(s), x.at(t), cs)) {
        res.witness.push_back({t, s, *g});
        found = true;
      }
    }
    if (!found) {
      res.witness.clear();
      return res;
    }
  }
  res.verdict = Verdict::True;
  return res;
}

LimResult lim_lim1_endo(const GroupHom& phi, std::size_t budget) {
  // Restrict to A' = φ^e A, where φ is injective; the inclusion is a pro-isomorphism.
  GroupHom pe = stable_kernel_power(phi);
  auto im = image(pe);
  GroupHom r = restrict_endo(im.sq, phi);
  const AbGroup& a = im.sq.group();
  if (is_surjective(r)) return {a, Lim1::Zero, true};
  // Images φ^k A' strictly decrease forever. Torsion lies in every image; on the
  // free quotient, a power with all invariant factors >= 2 forces the intersection to 0.
  std::size_t t = a.torsion().size(), fr = a.free_rank();
  Matrix fb = r.matrix().block(t, t, fr, fr);
  Matrix p = fb;
  for (std::size_t k = 1; k <= std::max<std::size_t>(budget, 1); ++k) {
    Vec d = snf_diagonal(p);
    if (d.size() == fr && d[0] >= 2) return {AbGroup::from_invariants(a.ring(), a.torsion(), 0), Lim1::NonzeroUncountable, false};
    p = p * fb;
  }
  return {std::nullopt, Lim1::NonzeroUncountable, false};
}

LimResult lim_lim1(const GroupTower& t, std::size_t budget) {
  if (t.tail_kind() == TailKind::ConstantFrom) return {t.at(t.tail_start()), Lim1::Zero, true};
  return lim_lim1_endo(*t.endo(), budget);
}

ColimResult colim_endo(const GroupHom& phi) {
  GroupHom pe = stable_kernel_power(phi);
  auto k = kernel(pe);
  auto q = cokernel(k.map);
  GroupHom bar = restrict_endo(q.sq, phi);
  if (!is_surjective(bar)) return {std::nullopt, std::nullopt, std::nullopt};
  return {q.sq.group(), q.map, q.sq};
}

ColimResult colim(const DirectSystem& d) {
  if (d.entries.empty()) throw ShapeMismatch("empty direct system");
  if (d.kind == TailKind::ConstantFrom) return colim_endo(GroupHom::identity(d.entries.back()));
  if (!d.endo) throw ShapeMismatch("repeat_from direct system needs an endomorphism");
  return colim_endo(*d.endo);
}

GroupHom induced_on_colim(const ColimResult& c, const GroupHom& m) {
  if (!c.quotient) throw Error("colimit unknown");
  return restrict_endo(*c.quotient, m);
}

ProHomResult lim_colim_tail(const AbGroup& group, const std::optional<GroupHom>& pre,
                            const std::optional<GroupHom>& post, std::size_t budget) {
  ColimResult c = colim_endo(pre ? *pre : GroupHom::identity(group));
  if (!c.value) return {std::nullopt, "colimit over the source tower is not finitely generated"};
  if (!post) return {*c.value, ""};
  LimResult l = lim_lim1_endo(induced_on_colim(c, *post), budget);
  if (!l.lim) return {std::nullopt, "limit over the target tower not determined within budget"};
  return {*l.lim, ""};
}

ProHomResult pro_hom(const GroupTower& x, const GroupTower& y, std::size_t budget) {
  const AbGroup& xa = x.at(x.tail_start());
  const AbGroup& yb = y.at(y.tail_start());
  HomGroup h(xa, yb);
  const AbGroup& g = h.group();
  auto induced = [&](auto&& fn) {
    Matrix m(g.ring(), g.rank(), g.rank());
    for (std::size_t j = 0; j < g.rank(); ++j) m.set_column(j, h.from_hom(fn(h.to_hom(unit_vec(g.rank(), j)))));
    return GroupHom(g, g, m);
  };
  std::optional<GroupHom> pre, post;
  if (x.tail_kind() == TailKind::RepeatFrom) pre = induced([&](const GroupHom& u) { return compose(u, *x.endo()); });
  if (y.tail_kind() == TailKind::RepeatFrom) post = induced([&](const GroupHom& u) { return compose(*y.endo(), u); });
  return lim_colim_tail(g, pre, post, budget);
}

}  // namespace tmodel
