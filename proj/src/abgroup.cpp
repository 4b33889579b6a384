#include "tmodel/abgroup.hpp"

#include <sstream>

#include "tmodel/errors.hpp"

namespace tmodel {

// ---------------------------------------------------------------- AbGroup

AbGroup AbGroup::from_presentation(Ring ring, std::size_t ngens, const Matrix& relations) {
  if (relations.rows() != ngens) throw ShapeMismatch("presentation rows != generator count");
  if (!(relations.ring() == ring)) throw RingMismatch("presentation over " + relations.ring().name());
  AbGroup g;
  g.ring_ = ring;
  g.ngens_ = ngens;
  g.relations_ = relations;
  SnfResult f = snf(relations);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < f.rank(); ++i)
    if (f.diagonal[i] != 1) {
      keep.push_back(i);
      g.torsion_.push_back(f.diagonal[i]);
    }
  for (std::size_t i = f.rank(); i < ngens; ++i) keep.push_back(i);
  g.free_rank_ = ngens - f.rank();
  g.to_canonical_ = f.U.select_rows(keep);
  g.from_canonical_ = f.U_inv.select_columns(keep);
  return g;
}

AbGroup AbGroup::free(Ring ring, std::size_t rank) {
  return from_presentation(ring, rank, Matrix(ring, rank, 0));
}

AbGroup AbGroup::from_invariants(Ring ring, const Vec& torsion, std::size_t free_rank) {
  std::size_t n = torsion.size() + free_rank;
  Matrix rel(ring, n, torsion.size());
  for (std::size_t i = 0; i < torsion.size(); ++i) rel.set(i, i, torsion[i]);
  return from_presentation(ring, n, rel);
}

Vec AbGroup::orders() const {
  Vec o(rank());
  for (std::size_t i = 0; i < torsion_.size(); ++i) o[i] = torsion_[i];
  return o;
}

std::optional<mpz_class> AbGroup::cardinality() const {
  if (ring_.is_field()) {
    mpz_class c;
    mpz_ui_pow_ui(c.get_mpz_t(), ring_.characteristic(), free_rank_);
    return c;
  }
  if (free_rank_ != 0) return std::nullopt;
  mpz_class c = 1;
  for (const auto& d : torsion_) c *= d;
  return c;
}

Vec AbGroup::reduce(Vec c) const {
  if (c.size() != rank()) throw ShapeMismatch("coordinate vector length");
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < torsion_.size())
      mpz_fdiv_r(c[i].get_mpz_t(), c[i].get_mpz_t(), torsion_[i].get_mpz_t());
    else
      ring_.reduce(c[i]);
  }
  return c;
}

std::string AbGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  if (ring_.is_field()) {
    os << ring_.name();
    if (free_rank_ > 1) os << '^' << free_rank_;
    return os.str();
  }
  bool first = true;
  if (free_rank_ > 0) {
    os << 'Z';
    if (free_rank_ > 1) os << '^' << free_rank_;
    first = false;
  }
  for (const auto& d : torsion_) {
    os << (first ? "" : " + ") << "Z/" << d.get_str();
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- GroupHom

namespace {

Matrix reduce_rows(Matrix m, const AbGroup& target) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    mpz_class d = target.order(i);
    if (d == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      mpz_fdiv_r(m.raw(i, j).get_mpz_t(), m(i, j).get_mpz_t(), d.get_mpz_t());
  }
  return m;
}

}  // namespace

GroupHom::GroupHom(AbGroup source, AbGroup target, Matrix m)
    : source_(std::move(source)), target_(std::move(target)) {
  if (!(source_.ring() == target_.ring())) throw RingMismatch("hom between different rings");
  if (m.rows() != target_.rank() || m.cols() != source_.rank())
    throw ShapeMismatch("hom matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                        ", expected " + std::to_string(target_.rank()) + "x" +
                        std::to_string(source_.rank()));
  m_ = reduce_rows(m.reduced_in(source_.ring()), target_);
  // order(source gen j) * column j must vanish in the target.
  for (std::size_t j = 0; j < source_.rank(); ++j) {
    mpz_class a = source_.order(j);
    for (std::size_t i = 0; i < target_.rank(); ++i) {
      if (m_(i, j) == 0) continue;
      mpz_class b = target_.order(i);
      mpz_class prod = a * m_(i, j);
      bool ok = (b == 0) ? (a == 0 || source_.ring().is_field())
                         : mpz_divisible_p(prod.get_mpz_t(), b.get_mpz_t()) != 0;
      if (!ok) throw InvalidMorphism("matrix does not respect relations");
    }
  }
}

GroupHom GroupHom::zero(const AbGroup& s, const AbGroup& t) {
  return GroupHom(s, t, Matrix(s.ring(), t.rank(), s.rank()));
}

GroupHom GroupHom::identity(const AbGroup& a) {
  return GroupHom(a, a, Matrix::identity(a.ring(), a.rank()));
}

GroupHom GroupHom::from_presentation_matrix(const AbGroup& s, const AbGroup& t, const Matrix& m) {
  return GroupHom(s, t, t.to_canonical() * m * s.from_canonical());
}

GroupHom compose(const GroupHom& g, const GroupHom& f) {
  if (!f.target().isomorphic(g.source()) || f.target().rank() != g.source().rank())
    throw ShapeMismatch("composition of non-composable homs");
  return GroupHom(f.source(), g.target(), g.matrix() * f.matrix());
}

GroupHom operator+(const GroupHom& a, const GroupHom& b) {
  return GroupHom(a.source(), a.target(), a.matrix() + b.matrix());
}

GroupHom operator-(const GroupHom& a) { return GroupHom(a.source(), a.target(), -a.matrix()); }

// ---------------------------------------------------------------- Subquotient

Subquotient::Subquotient(const Matrix& l_gens, const Matrix& k_gens) : ambient_(l_gens.rows()) {
  if (k_gens.rows() != ambient_) throw ShapeMismatch("subquotient ambient dimensions differ");
  basis_ = column_basis(l_gens);
  sys_ = LinearSystem(basis_);
  auto rel = sys_.solve(k_gens);
  if (!rel) throw ContainmentViolation("denominator not contained in numerator");
  group_ = AbGroup::from_presentation(l_gens.ring(), basis_.cols(), *rel);
}

Vec Subquotient::coordinates(const Vec& v) const {
  auto x = sys_.solve(v);
  if (!x) throw ContainmentViolation("element outside the numerator lattice");
  return group_.from_presentation_coords(*x);
}

Vec Subquotient::lift(const Vec& c) const { return basis_ * (group_.from_canonical() * c); }

Matrix Subquotient::lifts() const { return basis_ * group_.from_canonical(); }

GroupHom induced_map(const Subquotient& from, const Subquotient& to, const Matrix& f) {
  const AbGroup& s = from.group();
  Matrix m(s.ring(), to.group().rank(), s.rank());
  Matrix images = f * from.lifts();
  for (std::size_t j = 0; j < s.rank(); ++j) m.set_column(j, to.coordinates(images.column(j)));
  return GroupHom(s, to.group(), m);
}

// ---------------------------------------------------------------- kernels etc.

namespace {

Matrix order_diag(const AbGroup& a) { return Matrix::diagonal(a.ring(), a.orders()); }

Matrix columns_as_hom(const Subquotient& sq, const AbGroup& target, bool reduce) {
  Matrix l = sq.lifts();
  if (!reduce) return l;
  for (std::size_t j = 0; j < l.cols(); ++j) l.set_column(j, target.reduce(l.column(j)));
  return l;
}

}  // namespace

SubgroupResult kernel(const GroupHom& f) {
  const AbGroup& a = f.source();
  const AbGroup& b = f.target();
  Matrix big = Matrix::hstack(f.matrix(), order_diag(b));
  Matrix ker = kernel_basis(big);
  Matrix proj = ker.block(0, 0, a.rank(), ker.cols());
  Matrix da = order_diag(a);
  Subquotient sq(Matrix::hstack(proj, da), da);
  Matrix incl = columns_as_hom(sq, a, true);
  GroupHom inc(sq.group(), a, incl);
  return {std::move(sq), std::move(inc)};
}

SubgroupResult image(const GroupHom& f) {
  const AbGroup& b = f.target();
  Matrix db = order_diag(b);
  Subquotient sq(Matrix::hstack(f.matrix(), db), db);
  GroupHom inc(sq.group(), b, columns_as_hom(sq, b, true));
  return {std::move(sq), std::move(inc)};
}

SubgroupResult cokernel(const GroupHom& f) {
  const AbGroup& b = f.target();
  Subquotient sq(Matrix::identity(b.ring(), b.rank()), Matrix::hstack(f.matrix(), order_diag(b)));
  Matrix m(b.ring(), sq.group().rank(), b.rank());
  for (std::size_t j = 0; j < b.rank(); ++j) m.set_column(j, sq.coordinates(unit_vec(b.rank(), j)));
  GroupHom proj(b, sq.group(), m);
  return {std::move(sq), std::move(proj)};
}

SubgroupResult subquotient(const AbGroup& a, const GroupHom& s, const GroupHom& t) {
  Matrix da = order_diag(a);
  Matrix l = Matrix::hstack(s.matrix(), da);
  Matrix k = Matrix::hstack(t.matrix(), da);
  if (!LinearSystem(l).solve(k)) throw ContainmentViolation("im T is not contained in im S");
  Subquotient sq(l, k);
  Matrix m(a.ring(), sq.group().rank(), s.source().rank());
  for (std::size_t j = 0; j < s.source().rank(); ++j)
    m.set_column(j, sq.coordinates(s.matrix().column(j)));
  GroupHom proj(s.source(), sq.group(), m);
  return {std::move(sq), std::move(proj)};
}

bool is_injective(const GroupHom& f) { return kernel(f).sq.group().is_trivial(); }
bool is_surjective(const GroupHom& f) { return cokernel(f).sq.group().is_trivial(); }
bool is_isomorphism(const GroupHom& f) { return is_injective(f) && is_surjective(f); }

bool subgroup_contained(const AbGroup& a, const Matrix& x, const Matrix& y) {
  Matrix gens = Matrix::hstack(y, order_diag(a));
  return LinearSystem(gens).solve(x).has_value();
}

bool same_subgroup(const AbGroup& a, const Matrix& x, const Matrix& y) {
  return subgroup_contained(a, x, y) && subgroup_contained(a, y, x);
}

bool exact_at(const GroupHom& f, const GroupHom& g) {
  const AbGroup& b = f.target();
  Matrix im = f.matrix();
  Matrix ker = kernel(g).map.matrix();
  return same_subgroup(b, im, ker);
}

std::optional<Vec> solve_modulo(const Matrix& m, const Vec& target_orders, const Vec& y) {
  Matrix big = Matrix::hstack(m, Matrix::diagonal(m.ring(), target_orders));
  auto x = LinearSystem(big).solve(y);
  if (!x) return std::nullopt;
  x->resize(m.cols());
  return x;
}

std::optional<Vec> preimage(const GroupHom& f, const Vec& y) {
  auto x = solve_modulo(f.matrix(), f.target().orders(), y);
  if (!x) return std::nullopt;
  return f.source().reduce(*x);
}

// ---------------------------------------------------------------- Hom groups

HomGroup::HomGroup(const AbGroup& a, const AbGroup& b) : a_(a), b_(b) {
  if (!(a.ring() == b.ring())) throw RingMismatch("Hom(" + a.ring().name() + ", " + b.ring().name() + ")");
  Vec rel_orders;
  for (std::size_t i = 0; i < b.rank(); ++i)
    for (std::size_t j = 0; j < a.rank(); ++j) {
      mpz_class ai = a.order(j), bi = b.order(i);
      if (bi == 0) {
        if (ai != 0 && !a.ring().is_field()) continue;  // torsion into free
        slots_.push_back({i, j, 1});
        rel_orders.push_back(0);
      } else {
        mpz_class g = gcd(ai, bi);  // gcd(0, b) = b
        if (g == 1) continue;
        slots_.push_back({i, j, bi / g});
        rel_orders.push_back(g);
      }
    }
  std::size_t n = slots_.size();
  std::size_t ntors = 0;
  for (const auto& o : rel_orders) ntors += (o != 0);
  Matrix rel(a.ring(), n, ntors);
  std::size_t c = 0;
  for (std::size_t s = 0; s < n; ++s)
    if (rel_orders[s] != 0) rel.set(s, c++, rel_orders[s]);
  group_ = AbGroup::from_presentation(a.ring(), n, rel);
}

GroupHom HomGroup::to_hom(const Vec& c) const {
  Vec x = group_.from_canonical() * c;
  Matrix m(a_.ring(), b_.rank(), a_.rank());
  for (std::size_t s = 0; s < slots_.size(); ++s) m.set(slots_[s].i, slots_[s].j, slots_[s].gen * x[s]);
  return GroupHom(a_, b_, m);
}

Vec HomGroup::from_hom(const GroupHom& h) const {
  const Matrix& m = h.matrix();
  if (m.rows() != b_.rank() || m.cols() != a_.rank()) throw ShapeMismatch("hom outside Hom(A,B)");
  Vec x(slots_.size());
  std::vector<bool> covered(b_.rank() * a_.rank(), false);
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const auto& sl = slots_[s];
    covered[sl.i * a_.rank() + sl.j] = true;
    const mpz_class& v = m(sl.i, sl.j);
    if (!mpz_divisible_p(v.get_mpz_t(), sl.gen.get_mpz_t())) throw InvalidMorphism("entry not a multiple of slot generator");
    mpz_divexact(x[s].get_mpz_t(), v.get_mpz_t(), sl.gen.get_mpz_t());
  }
  for (std::size_t i = 0; i < b_.rank(); ++i)
    for (std::size_t j = 0; j < a_.rank(); ++j)
      if (!covered[i * a_.rank() + j] && m(i, j) != 0) throw InvalidMorphism("entry in a trivial Hom slot");
  return group_.from_presentation_coords(x);
}

AbGroup hom_group(const AbGroup& a, const AbGroup& b) { return HomGroup(a, b).group(); }

std::optional<GroupHom> solve_hom_constraints(const AbGroup& a, const AbGroup& b,
                                              const std::vector<HomConstraint>& cs) {
  if (!(a.ring() == b.ring())) throw RingMismatch("solve_hom_constraints");
  HomGroup hab(a, b);
  const AbGroup& h = hab.group();
  if (cs.empty()) return GroupHom::zero(a, b);

  // Stack g ↦ post∘g∘pre over all constraints into one matrix on canonical coordinates.
  std::vector<HomGroup> targets;
  std::size_t total = 0;
  for (const auto& c : cs) {
    if (!(c.rhs.source().ring() == a.ring())) throw RingMismatch("constraint ring");
    targets.emplace_back(c.rhs.source(), c.rhs.target());
    total += targets.back().group().rank();
  }
  Matrix phi(a.ring(), total, h.rank());
  Vec rhs(total), orders(total);
  std::size_t off = 0;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const auto& c = cs[k];
    const AbGroup& tg = targets[k].group();
    for (std::size_t e = 0; e < h.rank(); ++e) {
      GroupHom g = hab.to_hom(unit_vec(h.rank(), e));
      Matrix gm = g.matrix();
      if (c.pre) gm = gm * c.pre->matrix();
      if (c.post) gm = c.post->matrix() * gm;
      GroupHom composite(c.rhs.source(), c.rhs.target(), gm);
      Vec col = targets[k].from_hom(composite);
      for (std::size_t r = 0; r < tg.rank(); ++r) phi.set(off + r, e, col[r]);
    }
    Vec r = targets[k].from_hom(c.rhs);
    for (std::size_t i = 0; i < tg.rank(); ++i) {
      rhs[off + i] = r[i];
      orders[off + i] = tg.order(i);
    }
    off += tg.rank();
  }
  auto x = solve_modulo(phi, orders, rhs);
  if (!x) return std::nullopt;
  return hab.to_hom(h.reduce(*x));
}

}  // namespace tmodel
