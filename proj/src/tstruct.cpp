#include "tmodel/tstruct.hpp"

#include <algorithm>

#include "tmodel/errors.hpp"

namespace tmodel {

// ---------------------------------------------------------------- truncations

Truncation truncate_above(const ChainComplex& x, int n) {
  const Ring& r = x.ring();
  if (n <= x.lo()) return {x, ChainMap::identity(x)};
  if (n > x.hi()) {
    ChainComplex z(r, n, {0});
    return {z, ChainMap::zero(z, x)};
  }
  Matrix k = kernel_basis(x.diff(n));
  std::vector<std::size_t> ranks{k.cols()};
  std::map<int, Matrix> d, anchor;
  anchor.emplace(n, k);
  for (int m = n + 1; m <= x.hi(); ++m) {
    ranks.push_back(x.rank(m));
    anchor.emplace(m, Matrix::identity(r, x.rank(m)));
    if (m == n + 1) {
      auto c = LinearSystem(k).solve(x.diff(m));
      if (!c) throw Error("boundaries not inside cycles: input is not a complex");
      d.emplace(m, *c);
    } else {
      d.emplace(m, x.diff(m));
    }
  }
  ChainComplex t(r, n, ranks, d);
  return {t, ChainMap(t, x, anchor)};
}

Truncation truncate_below_free(const ChainComplex& x, int n) {
  Cone c = cone(truncate_above(x, n + 1).anchor);
  return {c.complex, c.incl};
}

ChainMap factor_through_mono(const ChainMap& g, const ChainMap& mono) {
  const auto& s = g.source();
  std::map<int, Matrix> c;
  for (int k = s.lo(); k <= s.hi(); ++k) {
    if (s.rank(k) == 0) continue;
    auto sol = LinearSystem(mono.comp(k)).solve(g.comp(k));
    if (!sol) throw ContainmentViolation("map does not factor through mono in degree " + std::to_string(k));
    c.emplace(k, *sol);
  }
  return ChainMap(s, mono.source(), c);
}

ChainMap truncate_above_map(const ChainMap& f, const Truncation& tx, const Truncation& ty) {
  return factor_through_mono(compose(f, tx.anchor), ty.anchor);
}

ChainMap truncate_above_map(const ChainMap& f, int n) {
  return truncate_above_map(f, truncate_above(f.source(), n), truncate_above(f.target(), n));
}

ChainMap truncate_below_map(const ChainMap& f, int n) {
  Truncation tx = truncate_above(f.source(), n + 1), ty = truncate_above(f.target(), n + 1);
  return cone_map(tx.anchor, ty.anchor, truncate_above_map(f, tx, ty), f);
}

TruncationTower truncation_tower(const ChainComplex& x) {
  TruncationTower t;
  t.base = x;
  for (int n = x.lo(); n <= x.hi() + 1; ++n) t.above.emplace(n, truncate_above(x, n));
  for (int n = x.lo(); n <= x.hi(); ++n) {
    t.maps_above.emplace(n, factor_through_mono(t.above.at(n + 1).anchor, t.above.at(n).anchor));
    Cone c = cone(t.above.at(n + 1).anchor);
    t.below.emplace(n, Truncation{c.complex, c.incl});
  }
  for (int n = x.lo() + 1; n <= x.hi(); ++n)
    t.maps_below.emplace(n, cone_map(t.above.at(n + 1).anchor, t.above.at(n).anchor, t.maps_above.at(n),
                                     ChainMap::identity(x)));
  return t;
}

AbGroup heart_homology(const ChainComplex& x, int n) { return homology(x, n); }

bool layer_triangle_check(const ChainComplex& x, int n) {
  Truncation a1 = truncate_above(x, n + 1), a0 = truncate_above(x, n);
  ChainComplex c = cone(factor_through_mono(a1.anchor, a0.anchor)).complex;
  for (int m = c.lo(); m <= c.hi(); ++m) {
    AbGroup h = homology(c, m);
    if (m == n ? !h.isomorphic(homology(x, n)) : !h.is_trivial()) return false;
  }
  if (n < c.lo() || n > c.hi()) return homology(x, n).is_trivial();
  return true;
}

// ---------------------------------------------------------------- classification

MapClassification classify_map(const ChainMap& f) {
  auto [a, b] = homology_support(cone(f).complex);
  if (a > b) return {kPlusInfinity, kMinusInfinity, true};
  return {a - 1, b, false};
}

MapClassification classify_map_by_homology(const ChainMap& f) {
  const auto& x = f.source();
  const auto& y = f.target();
  int lo = std::min(x.lo(), y.lo()) - 1, hi = std::max(x.hi(), y.hi()) + 1;
  std::vector<bool> inj, surj;
  for (int i = lo; i <= hi; ++i) {
    GroupHom h = induced_homology_map(f, i);
    inj.push_back(is_injective(h));
    surj.push_back(is_surjective(h));
  }
  MapClassification c{kPlusInfinity, kMinusInfinity, true};
  for (int i = lo; i <= hi; ++i)
    if (!(inj[i - lo] && surj[i - lo])) {
      c.max_n_equivalence = surj[i - lo] ? i : i - 1;
      c.is_weak_equivalence = false;
      break;
    }
  for (int i = hi; i >= lo; --i)
    if (!(inj[i - lo] && surj[i - lo])) {
      c.min_co_n_equivalence = inj[i - lo] ? i : i + 1;
      break;
    }
  return c;
}

bool is_n_equivalence(const ChainMap& f, int n) { return n <= classify_map(f).max_n_equivalence; }
bool is_co_n_equivalence(const ChainMap& f, int n) { return n >= classify_map(f).min_co_n_equivalence; }

namespace {

bool unit_diagonal(const Vec& d) {
  return std::all_of(d.begin(), d.end(), [](const mpz_class& x) { return x == 1; });
}

}  // namespace

bool is_cofibration(const ChainMap& f) {
  const auto& x = f.source();
  for (int k = x.lo(); k <= x.hi(); ++k) {
    if (x.rank(k) == 0) continue;
    Vec d = snf_diagonal(f.comp(k));
    if (d.size() != x.rank(k) || !unit_diagonal(d)) return false;
  }
  return true;
}

bool is_fibration(const ChainMap& f) {
  const auto& y = f.target();
  for (int k = y.lo(); k <= y.hi(); ++k) {
    if (y.rank(k) == 0) continue;
    Vec d = snf_diagonal(f.comp(k));
    if (d.size() != y.rank(k) || !unit_diagonal(d)) return false;
  }
  return true;
}

bool is_n_cofibration(const ChainMap& f, int n) { return is_cofibration(f) && is_n_equivalence(f, n); }
bool is_co_n_fibration(const ChainMap& f, int n) { return is_fibration(f) && is_co_n_equivalence(f, n); }

// ---------------------------------------------------------------- factorization

namespace {

// Z = X ⊕ (extra cells); boundaries are written in Z_{k-1} coordinates, shorter
// vectors being implicitly zero-padded.
struct CellData {
  std::map<int, std::vector<Vec>> boundary;
  std::map<int, std::vector<Vec>> image;  // in Y_k
};

struct Built {
  ChainComplex z;
  ChainMap i, p;
};

std::size_t extra_count(const CellData& cd, int k) {
  auto it = cd.boundary.find(k);
  return it == cd.boundary.end() ? 0 : it->second.size();
}

Built materialize(const ChainMap& f, const CellData& cd) {
  const auto& x = f.source();
  const auto& y = f.target();
  const Ring& r = x.ring();
  int lo = x.lo(), hi = x.hi();
  for (const auto& [k, v] : cd.boundary)
    if (!v.empty()) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  std::vector<std::size_t> ranks;
  for (int k = lo; k <= hi; ++k) ranks.push_back(x.rank(k) + extra_count(cd, k));
  auto rk = [&](int k) { return (k < lo || k > hi) ? std::size_t{0} : ranks[k - lo]; };
  std::map<int, Matrix> d, ic, pc;
  for (int k = lo; k <= hi; ++k) {
    std::size_t xk = x.rank(k);
    if (k > lo) {
      Matrix m(r, rk(k - 1), rk(k));
      m.set_block(0, 0, x.diff(k));
      auto it = cd.boundary.find(k);
      if (it != cd.boundary.end())
        for (std::size_t c = 0; c < it->second.size(); ++c) {
          const Vec& b = it->second[c];
          for (std::size_t row = 0; row < b.size(); ++row) m.set(row, xk + c, b[row]);
        }
      d.emplace(k, m);
    }
    Matrix inc(r, rk(k), xk);
    inc.set_block(0, 0, Matrix::identity(r, xk));
    ic.emplace(k, inc);
    Matrix pm(r, y.rank(k), rk(k));
    pm.set_block(0, 0, f.comp(k));
    auto it = cd.image.find(k);
    if (it != cd.image.end())
      for (std::size_t c = 0; c < it->second.size(); ++c) pm.set_column(xk + c, it->second[c]);
    pc.emplace(k, pm);
  }
  ChainComplex z(r, lo, ranks, d);
  return {z, ChainMap(x, z, ic), ChainMap(z, y, pc)};
}

void add_cell(CellData& cd, int k, Vec boundary, Vec image) {
  cd.boundary[k].push_back(std::move(boundary));
  cd.image[k].push_back(std::move(image));
}

// Kernel of a degreewise surjection as a complex, with its inclusion matrices.
struct Fiber {
  ChainComplex f;
  std::map<int, Matrix> incl;
};

Fiber fiber_of(const ChainMap& p) {
  const auto& z = p.source();
  const Ring& r = z.ring();
  Fiber out;
  std::vector<std::size_t> ranks;
  for (int k = z.lo(); k <= z.hi(); ++k) {
    Matrix kb = kernel_basis(p.comp(k));
    ranks.push_back(kb.cols());
    out.incl.emplace(k, kb);
  }
  std::map<int, Matrix> d;
  for (int k = z.lo() + 1; k <= z.hi(); ++k) {
    auto c = LinearSystem(out.incl.at(k - 1)).solve(z.diff(k) * out.incl.at(k));
    if (!c) throw Error("fiber differential does not factor");
    d.emplace(k, *c);
  }
  out.f = ChainComplex(r, z.lo(), ranks, d);
  return out;
}

}  // namespace

Factorization factor_n(const ChainMap& f, int n) {
  const auto& x = f.source();
  const auto& y = f.target();
  const Ring& r = x.ring();
  CellData cd;

  // Disks D(e_j) = (e -> e') wherever p_k misses a basis vector of Y_k.
  for (int k = y.hi(); k >= y.lo(); --k) {
    std::size_t yk = y.rank(k);
    if (yk == 0) continue;
    Built b = materialize(f, cd);
    Matrix pk = b.p.comp(k);
    for (std::size_t j = 0; j < yk; ++j) {
      Vec ej = unit_vec(yk, j);
      if (LinearSystem(pk).contains(ej)) continue;
      std::size_t lower = x.rank(k - 1) + extra_count(cd, k - 1);
      add_cell(cd, k - 1, Vec{}, y.diff(k).column(j));
      add_cell(cd, k, unit_vec(lower + 1, lower), ej);
      pk = Matrix::hstack(pk, Matrix::from_columns(r, yk, {ej}));
    }
  }

  // Kill H_k(ker p) for k >= n with cells of degree k+1 mapping to zero.
  Built b = materialize(f, cd);
  for (int k = std::max(n, b.z.lo()); k <= b.z.hi(); ++k) {
    Fiber fb = fiber_of(b.p);
    Subquotient h = homology_sq(fb.f, k);
    if (h.group().is_trivial()) continue;
    Matrix cycles = fb.incl.at(k) * h.lifts();
    for (std::size_t g = 0; g < cycles.cols(); ++g) add_cell(cd, k + 1, cycles.column(g), zero_vec(y.rank(k + 1)));
    b = materialize(f, cd);
  }

  if (!(compose(b.p, b.i) == f)) throw Error("factor_n: composite differs from f");
  if (!validate(b.i) || !validate(b.p)) throw Error("factor_n: produced a non-chain map");
  if (!is_n_cofibration(b.i, n)) throw Error("factor_n: i is not an n-cofibration");
  if (!is_co_n_fibration(b.p, n)) throw Error("factor_n: p is not a co-n-fibration");
  return {b.i, b.p};
}

// ---------------------------------------------------------------- lifting

std::optional<ChainMap> find_lift(const ChainMap& i, const ChainMap& p, const ChainMap& top,
                                  const ChainMap& bottom, int n) {
  const auto& a = i.source();
  const auto& bcx = i.target();
  const auto& e = p.source();
  const auto& y = p.target();
  const Ring& r = a.ring();
  if (!is_n_cofibration(i, n)) throw PreconditionViolated("i is not an n-cofibration");
  if (!is_co_n_fibration(p, n)) throw PreconditionViolated("p is not a co-n-fibration");
  if (!(compose(p, top) == compose(bottom, i))) throw PreconditionViolated("square does not commute");

  // Split B_k = i(A_k) ⊕ σ(Q_k) with retraction ρ and projection π.
  std::map<int, Matrix> pi, sigma, rho, s, h0, kin;
  std::vector<std::size_t> qranks;
  for (int k = bcx.lo(); k <= bcx.hi(); ++k) {
    SnfResult f = snf(i.comp(k));
    std::size_t ak = a.rank(k), bk = bcx.rank(k);
    pi.emplace(k, f.U.block(ak, 0, bk - ak, bk));
    sigma.emplace(k, f.U_inv.block(0, ak, bk, bk - ak));
    rho.emplace(k, f.V * f.U.block(0, 0, ak, bk));
    qranks.push_back(bk - ak);
  }
  std::map<int, Matrix> dq;
  for (int k = bcx.lo() + 1; k <= bcx.hi(); ++k) dq.emplace(k, pi.at(k - 1) * bcx.diff(k) * sigma.at(k));
  ChainComplex q(r, bcx.lo(), qranks, dq);

  Fiber fb = fiber_of(p);
  for (int k = bcx.lo(); k <= bcx.hi(); ++k) {
    auto sk = LinearSystem(p.comp(k)).solve(Matrix::identity(r, y.rank(k)));
    if (!sk) throw PreconditionViolated("p not surjective in degree " + std::to_string(k));
    h0.emplace(k, top.comp(k) * rho.at(k) + (*sk) * bottom.comp(k) * sigma.at(k) * pi.at(k));
  }
  auto H0 = [&](int k) {
    auto it = h0.find(k);
    return it != h0.end() ? it->second : Matrix(r, e.rank(k), bcx.rank(k));
  };
  auto K = [&](int k) {
    auto it = fb.incl.find(k);
    return it != fb.incl.end() ? it->second : Matrix(r, e.rank(k), 0);
  };

  // δ = d h0 - h0 d vanishes on i(A) and lands in ker p; write it as ι ε π.
  HomComplex hq(q, fb.f);
  std::map<int, Matrix> eps;
  for (int k = bcx.lo(); k <= bcx.hi(); ++k) {
    Matrix delta = e.diff(k) * H0(k) - H0(k - 1) * bcx.diff(k);
    auto ek = LinearSystem(K(k - 1)).solve(delta * sigma.at(k));
    if (!ek) return std::nullopt;
    eps.emplace(k, -*ek);
  }
  auto phi = LinearSystem(hq.complex().diff(0)).solve(hq.pack(-1, eps));
  if (!phi) return std::nullopt;
  auto blocks = hq.unpack(0, *phi);

  std::map<int, Matrix> hc;
  for (int k = bcx.lo(); k <= bcx.hi(); ++k) {
    Matrix hk = H0(k);
    auto it = blocks.find(k);
    if (it != blocks.end()) hk += K(k) * it->second * pi.at(k);
    hc.emplace(k, hk);
  }
  ChainMap h(bcx, e, hc);
  if (!validate(h) || !(compose(h, i) == top) || !(compose(p, h) == bottom)) return std::nullopt;
  return h;
}

// ---------------------------------------------------------------- cohomology

ChainComplex coefficient_complex(const AbGroup& a) {
  const Ring& r = a.ring();
  std::size_t t = a.torsion().size(), f = a.free_rank();
  if (t == 0) return ChainComplex::concentrated(r, 0, f);
  Matrix d(r, t + f, t);
  for (std::size_t i = 0; i < t; ++i) d.set(i, i, a.torsion()[i]);
  return ChainComplex(r, 0, {t + f, t}, {{1, d}});
}

AbGroup cohomology_with_coefficients(const ChainComplex& x, const AbGroup& a, int p) {
  if (!(x.ring() == a.ring())) throw RingMismatch("cohomology coefficients");
  return derived_hom(x, coefficient_complex(a), -p);
}

bool pushout_product_check(const ChainMap& f, int n, int j) {
  if (!is_n_cofibration(f, n)) throw PreconditionViolated("map is not an n-cofibration");
  ChainMap sf = shift(f, j);
  if (!is_n_cofibration(sf, n + j)) return false;
  auto [lo, hi] = homology_support(cone(sf).complex);
  return lo > hi || lo >= n + j + 1;
}

}  // namespace tmodel
