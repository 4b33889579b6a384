#include "tmodel/ahss.hpp"

#include <algorithm>

namespace tmodel {

namespace {

Matrix orders_diag(const AbGroup& a) { return Matrix::diagonal(a.ring(), a.orders()); }

GroupHom zero_between(const AbGroup& a, const AbGroup& b) { return GroupHom::zero(a, b); }

template <class M>
GroupHom map_or_zero(const M& maps, const Bidegree& at, const AbGroup& from, const AbGroup& to) {
  auto it = maps.find(at);
  return it != maps.end() ? it->second : zero_between(from, to);
}

GroupHom i_map(const ExactCouple& c, int p, int q) {
  return map_or_zero(c.i, {p, q}, c.D(p, q), c.D(p + 1, q - 1));
}
GroupHom j_map(const ExactCouple& c, int p, int q) { return map_or_zero(c.j, {p, q}, c.D(p, q), c.E(p, q)); }
GroupHom k_map(const ExactCouple& c, int p, int q) {
  return map_or_zero(c.k, {p, q}, c.E(p, q), c.D(p - 2, q + 1));
}

Subquotient slot_subquotient(const AbGroup& e, const Matrix& z, const Matrix& b) {
  Matrix d = orders_diag(e);
  return Subquotient(Matrix::hstack(z, d), Matrix::hstack(b, d));
}

}  // namespace

AbGroup ExactCouple::D(int p, int q) const {
  auto it = d.find({p, q});
  return it != d.end() ? it->second : AbGroup::zero(x.ring());
}

AbGroup ExactCouple::E(int p, int q) const {
  auto it = e.find({p, q});
  return it != e.end() ? it->second : AbGroup::zero(x.ring());
}

GroupHom ExactCouple::i_power(int p, int q, int m) const {
  if (q - m < q_lo) throw IndexOverflow("i-power leaves the couple window");
  GroupHom acc = GroupHom::identity(D(p, q));
  for (int s = 0; s < m; ++s) acc = compose(i_map(*this, p + s, q - s), acc);
  return acc;
}

ExactCouple build_exact_couple(const ChainComplex& x, const ChainComplex& y) {
  if (!(x.ring() == y.ring())) throw RingMismatch(x.ring().name() + " vs " + y.ring().name());
  ExactCouple c;
  c.x = x;
  c.y = y;
  auto [qlo, qhi] = homology_support(y);
  if (qlo > qhi) return c;
  c.q_lo = qlo;
  c.q_hi = qhi;
  // Hom(X, Z)_m vanishes unless lo(Z) - hi(X) <= m <= hi(Z) - lo(X); every Z here lives in [q, hi(Y) + 2].
  c.p_lo = -x.hi() - 2;
  c.p_hi = y.hi() - x.lo() - qlo + 3;

  std::map<int, Truncation> tr;
  for (int q = qlo; q <= qhi + 1; ++q) tr.emplace(q, truncate_above(y, q));
  ChainMap idx = ChainMap::identity(x);

  std::map<int, HomComplex> hd, he, hs;
  std::map<int, ChainMap> incl, jc, kc;
  for (int q = qlo; q <= qhi; ++q) {
    ChainMap a = factor_through_mono(tr.at(q + 1).anchor, tr.at(q).anchor);
    Cone cn = cone(a);
    c.layers.emplace(q, cn.complex);
    incl.emplace(q, a);
    jc.emplace(q, cn.incl);
    kc.emplace(q, cn.proj);
    hd.emplace(q, HomComplex(x, tr.at(q).complex));
    he.emplace(q, HomComplex(x, cn.complex));
    hs.emplace(q, HomComplex(x, cn.proj.target()));
  }

  std::map<Bidegree, Subquotient> sd, se;
  for (int q = qlo; q <= qhi; ++q)
    for (int p = c.p_lo; p <= c.p_hi; ++p) {
      sd.emplace(Bidegree{p, q}, derived_hom_sq(hd.at(q), p + q));
      se.emplace(Bidegree{p, q}, derived_hom_sq(he.at(q), p + q));
      c.d.emplace(Bidegree{p, q}, sd.at({p, q}).group());
      c.e.emplace(Bidegree{p, q}, se.at({p, q}).group());
    }

  for (int q = qlo; q <= qhi; ++q)
    for (int p = c.p_lo; p <= c.p_hi; ++p) {
      int m = p + q;
      const Subquotient& dpq = sd.at({p, q});
      const Subquotient& epq = se.at({p, q});
      c.j.emplace(Bidegree{p, q}, induced_map_on_derived_hom(hd.at(q), dpq, he.at(q), epq, idx, jc.at(q), m));
      if (q - 1 >= qlo && p + 1 <= c.p_hi)
        c.i.emplace(Bidegree{p, q},
                    induced_map_on_derived_hom(hd.at(q), dpq, hd.at(q - 1), sd.at({p + 1, q - 1}), idx, incl.at(q - 1), m));
      if (q + 1 <= qhi && p - 2 >= c.p_lo) {
        // [X, Σ τ≥q+1]_m and [X, τ≥q+1]_{m-1} share cycles and boundaries: the
        // Hom differentials differ only by a global sign.
        Subquotient ss = derived_hom_sq(hs.at(q), m);
        const Subquotient& target = sd.at({p - 2, q + 1});
        if (ss.ambient() != target.ambient()) throw ShapeMismatch("suspension identification");
        GroupHom to_susp = induced_map_on_derived_hom(he.at(q), epq, hs.at(q), ss, idx, kc.at(q), m);
        GroupHom desusp = induced_map(ss, target, Matrix::identity(x.ring(), ss.ambient()));
        c.k.emplace(Bidegree{p, q}, compose(desusp, to_susp));
      }
    }
  if (!couple_is_exact(c)) throw ExactnessViolation("exact couple fails exactness");
  return c;
}

bool couple_is_exact(const ExactCouple& c) {
  for (int q = c.q_lo; q <= c.q_hi; ++q)
    for (int p = c.p_lo; p <= c.p_hi; ++p) {
      if (!exact_at(i_map(c, p - 1, q + 1), j_map(c, p, q))) return false;
      if (!exact_at(j_map(c, p, q), k_map(c, p, q))) return false;
      if (!exact_at(k_map(c, p, q), i_map(c, p - 2, q + 1))) return false;
    }
  return true;
}

AbGroup Page::group(int p, int q) const {
  auto it = sq.find({p, q});
  return it != sq.end() ? it->second.group() : AbGroup::zero(ring);
}

Page page(const ExactCouple& c, int r) {
  if (r < 2) throw IndexOverflow("pages start at r = 2");
  Page pg;
  pg.ring = c.x.ring();
  pg.r = r;
  for (int q = c.q_lo; q <= c.q_hi; ++q)
    for (int p = c.p_lo; p <= c.p_hi; ++p) {
      AbGroup e = c.E(p, q);
      Matrix z = Matrix::identity(e.ring(), e.rank());
      Matrix b(e.ring(), e.rank(), 0);
      if (r > 2) {
        GroupHom k = k_map(c, p, q);
        if (q + r - 1 > c.q_hi) {
          z = kernel(k).map.matrix();
        } else {
          GroupHom ip = c.i_power(p - r, q + r - 1, r - 2);
          z = kernel(compose(cokernel(ip).map, k)).map.matrix();
        }
        int m = std::min(r - 2, q - c.q_lo);
        b = image(compose(j_map(c, p, q), kernel(c.i_power(p, q, m)).map)).map.matrix();
      }
      pg.sq.emplace(Bidegree{p, q}, slot_subquotient(e, z, b));
    }

  for (const auto& [at, src] : pg.sq) {
    auto [p, q] = at;
    int tp = p - r, tq = q + r - 1;
    AbGroup tg = pg.group(tp, tq);
    Matrix m(pg.ring, tg.rank(), src.group().rank());
    auto tit = pg.sq.find({tp, tq});
    if (tit != pg.sq.end()) {
      GroupHom k = k_map(c, p, q);
      GroupHom j = j_map(c, tp, tq);
      for (std::size_t g = 0; g < src.group().rank(); ++g) {
        Vec v = k.apply(src.lift(unit_vec(src.group().rank(), g)));
        Vec y = v;
        if (r > 2) {
          auto pre = preimage(c.i_power(tp, tq, r - 2), v);
          if (!pre) throw ExactnessViolation("d_" + std::to_string(r) + " undefined on a Z_r element");
          y = *pre;
        }
        m.set_column(g, tit->second.coordinates(j.apply(y)));
      }
    }
    pg.diff.emplace(at, GroupHom(src.group(), tg, m));
  }
  return pg;
}

Page derive(const ExactCouple& c, const Page& prev) {
  int r = prev.r;
  auto d_at = [&](int p, int q) {
    auto it = prev.diff.find({p, q});
    return it != prev.diff.end() ? it->second : GroupHom::zero(prev.group(p, q), prev.group(p - r, q + r - 1));
  };
  for (const auto& [at, d] : prev.diff) {
    auto [p, q] = at;
    if (!compose(d_at(p - r, q + r - 1), d).is_zero())
      throw ExactnessViolation("d_" + std::to_string(r) + " squares to nonzero at (" + std::to_string(p) + "," +
                               std::to_string(q) + ")");
  }
  Page next = page(c, r + 1);
  for (const auto& [at, d] : prev.diff) {
    auto [p, q] = at;
    GroupHom in = d_at(p + r, q - r + 1);
    AbGroup h = subquotient(prev.group(p, q), kernel(d).map, image(in).map).sq.group();
    if (!h.isomorphic(next.group(p, q)))
      throw ExactnessViolation("E_" + std::to_string(r + 1) + " differs from the homology of E_" + std::to_string(r));
  }
  return next;
}

SpectralSequence run_to_stable(const ExactCouple& c) {
  SpectralSequence ss;
  ss.couple = c;
  ss.r_max = c.q_hi >= c.q_lo ? c.q_hi - c.q_lo + 2 : 2;
  ss.pages.push_back(page(c, 2));
  while (ss.pages.back().r < ss.r_max) ss.pages.push_back(derive(c, ss.pages.back()));
  ss.stable_page = ss.r_max;
  for (auto it = ss.pages.rbegin(); it != ss.pages.rend(); ++it) {
    bool zero = std::all_of(it->diff.begin(), it->diff.end(), [](const auto& kv) { return kv.second.is_zero(); });
    if (!zero) break;
    ss.stable_page = it->r;
  }
  return ss;
}

SpectralSequence run_to_stable(const ChainComplex& x, const ChainComplex& y) {
  return run_to_stable(build_exact_couple(x, y));
}

bool e2_identification_check(const ExactCouple& c) {
  for (int q = c.q_lo; q <= c.q_hi; ++q) {
    AbGroup hq = homology(c.y, q);
    for (int p = c.p_lo; p <= c.p_hi; ++p)
      if (!c.E(p, q).isomorphic(cohomology_with_coefficients(c.x, hq, -p))) return false;
  }
  return true;
}

bool e2_identification_check(const ChainComplex& x, const ChainComplex& y) {
  return e2_identification_check(build_exact_couple(x, y));
}

namespace {

struct Filtration {
  AbGroup total;
  std::vector<int> qs;
  std::vector<SubgroupResult> steps;  // images inside total
};

Filtration filtration(const ChainComplex& x, const ChainComplex& y, int n) {
  Filtration f;
  f.total = derived_hom(x, y, n);
  auto [qlo, qhi] = homology_support(y);
  ChainMap idx = ChainMap::identity(x);
  for (int q = qlo; q <= qhi + 1 && qlo <= qhi; ++q) {
    f.qs.push_back(q);
    f.steps.push_back(image(induced_map_on_derived_hom(idx, truncate_above(y, q).anchor, n)));
  }
  return f;
}

// F_q / F_{q+1} as subquotients of [X, Y]_n.
std::map<int, Subquotient> graded_pieces(const Filtration& f) {
  std::map<int, Subquotient> out;
  for (std::size_t s = 0; s + 1 < f.steps.size(); ++s)
    out.emplace(f.qs[s], subquotient(f.total, f.steps[s].map, f.steps[s + 1].map).sq);
  return out;
}

}  // namespace

std::vector<FiltrationStep> abutment_filtration(const ChainComplex& x, const ChainComplex& y, int n) {
  Filtration f = filtration(x, y, n);
  std::vector<FiltrationStep> out;
  for (std::size_t s = 0; s < f.steps.size(); ++s)
    out.push_back({f.qs[s], f.steps[s].map.matrix(), f.steps[s].sq.group()});
  return out;
}

std::map<int, AbGroup> associated_graded(const ChainComplex& x, const ChainComplex& y, int n) {
  std::map<int, AbGroup> out;
  for (const auto& [q, sq] : graded_pieces(filtration(x, y, n))) out.emplace(q, sq.group());
  return out;
}

bool ConvergenceReport::all_iso() const {
  return std::all_of(graded_comparison.begin(), graded_comparison.end(), [](const auto& kv) { return kv.second; });
}

ConvergenceReport convergence_check(const SpectralSequence& ss) {
  const ExactCouple& c = ss.couple;
  ConvergenceReport rep;
  rep.stable_page = ss.stable_page;
  if (c.q_lo > c.q_hi) return rep;
  const Page& inf = ss.e_infinity();
  for (int n = c.p_lo + c.q_lo; n <= c.p_hi + c.q_hi; ++n) {
    // The column n = p + q read as a tower in q; it is zero once q > q_hi.
    std::vector<AbGroup> entries;
    std::vector<GroupHom> maps;
    for (int q = c.q_lo; q <= c.q_hi + 1; ++q) {
      entries.push_back(c.D(n - q, q));
      if (q > c.q_lo) maps.push_back(i_map(c, n - q, q));
    }
    LimResult l = lim_lim1(GroupTower(entries, maps, TailKind::ConstantFrom), 0);
    rep.lim_ok = rep.lim_ok && l.lim && l.lim->is_trivial();
    rep.lim1_ok = rep.lim1_ok && l.lim1 == Lim1::Zero;

    Filtration f = filtration(c.x, c.y, n);
    bool exhaustive = same_subgroup(f.total, f.steps.front().map.matrix(),
                                    Matrix::identity(f.total.ring(), f.total.rank()));
    bool vanishing = derived_hom(c.x, truncate_below_free(c.y, c.q_lo - 1).complex, n).is_trivial();
    rep.colim_ok = rep.colim_ok && exhaustive && vanishing;

    auto gr = graded_pieces(f);
    for (int q = c.q_lo; q <= c.q_hi; ++q)
      rep.graded_comparison[{n - q, q}] = inf.group(n - q, q).isomorphic(gr.at(q).group());
  }
  return rep;
}

ConvergenceReport convergence_check(const ChainComplex& x, const ChainComplex& y) {
  return convergence_check(run_to_stable(x, y));
}

bool ProAhssResult::all_iso() const {
  return std::all_of(comparison.begin(), comparison.end(), [](const auto& kv) { return kv.second == Verdict::True; });
}

ProAhssResult pro_ahss(const ComplexTower& x, const ChainComplex& y, std::optional<std::pair<int, int>> n_window) {
  ProAhssResult res;
  const ChainComplex& xs = x.at(x.tail_start());
  const std::optional<ChainMap>& phi = x.endo();
  SpectralSequence ss = run_to_stable(xs, y);
  const ExactCouple& c = ss.couple;
  if (c.q_lo > c.q_hi) return res;
  int nlo = n_window ? n_window->first : c.p_lo + c.q_lo;
  int nhi = n_window ? n_window->second : c.p_hi + c.q_hi;

  auto colim_of = [&](const AbGroup& g, const std::optional<GroupHom>& endo) -> std::optional<AbGroup> {
    return colim_endo(endo ? *endo : GroupHom::identity(g)).value;
  };

  for (int q = c.q_lo; q <= c.q_hi; ++q) {
    ChainComplex k = coefficient_complex(homology(y, q));
    for (int p = c.p_lo; p <= c.p_hi; ++p) {
      std::optional<GroupHom> pre;
      if (phi) pre = induced_map_on_derived_hom(*phi, ChainMap::identity(k), p);
      res.e2[{p, q}] = colim_of(derived_hom(xs, k, p), pre);
    }
  }

  for (int n = nlo; n <= nhi; ++n) {
    res.abutment[n] = hom_to_constant(x, y, n).value;
    Filtration f = filtration(xs, y, n);
    auto gr = graded_pieces(f);
    std::optional<Matrix> on_total;
    if (phi) on_total = induced_map_on_derived_hom(*phi, ChainMap::identity(y), n).matrix();
    for (int q = c.q_lo; q <= c.q_hi; ++q) {
      int p = n - q;
      const Subquotient& g = gr.at(q);
      std::optional<GroupHom> gr_endo, e_endo;
      auto sit = ss.e_infinity().sq.find({p, q});
      if (phi) {
        gr_endo = induced_map(g, g, *on_total);
        if (sit != ss.e_infinity().sq.end()) {
          Matrix on_e = induced_map_on_derived_hom(*phi, ChainMap::identity(c.layers.at(q)), n).matrix();
          e_endo = induced_map(sit->second, sit->second, on_e);
        }
      }
      std::optional<AbGroup> lhs = colim_of(ss.e_infinity().group(p, q), e_endo);
      std::optional<AbGroup> rhs = colim_of(g.group(), gr_endo);
      Verdict v = Verdict::Unknown;
      if (lhs && rhs) v = lhs->isomorphic(*rhs) ? Verdict::True : Verdict::False;
      res.comparison[{p, q}] = v;
    }
  }
  return res;
}

}  // namespace tmodel
