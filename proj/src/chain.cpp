#include "tmodel/chain.hpp"

#include <algorithm>

#include "tmodel/errors.hpp"

namespace tmodel {

// ---------------------------------------------------------------- complexes

ChainComplex::ChainComplex(Ring ring, int lo, std::vector<std::size_t> ranks,
                           const std::map<int, Matrix>& diffs)
    : ring_(ring), lo_(lo), ranks_(std::move(ranks)) {
  if (ranks_.empty()) ranks_.push_back(0);
  hi_ = lo_ + static_cast<int>(ranks_.size()) - 1;
  diffs_.clear();
  for (int n = lo_; n <= hi_; ++n) {
    std::size_t below = n == lo_ ? 0 : rank(n - 1);
    auto it = diffs.find(n);
    if (it == diffs.end()) {
      diffs_.emplace_back(ring_, below, rank(n));
      continue;
    }
    const Matrix& d = it->second;
    if (d.rows() != below || d.cols() != rank(n))
      throw ShapeMismatch("differential in degree " + std::to_string(n) + " has shape " +
                          std::to_string(d.rows()) + "x" + std::to_string(d.cols()));
    diffs_.push_back(d.reduced_in(ring_));
  }
  for (const auto& [n, d] : diffs)
    if ((n < lo_ || n > hi_) && !d.is_zero())
      throw ShapeMismatch("nonzero differential outside support at degree " + std::to_string(n));
}

ChainComplex ChainComplex::concentrated(Ring ring, int degree, std::size_t rank) {
  return ChainComplex(ring, degree, {rank});
}

ChainComplex ChainComplex::moore(Ring ring, const mpz_class& d, int n) {
  Matrix m(ring, 1, 1);
  m.set(0, 0, d);
  return ChainComplex(ring, n, {1, 1}, {{n + 1, m}});
}

std::size_t ChainComplex::rank(int n) const {
  if (n < lo_ || n > hi_) return 0;
  return ranks_[n - lo_];
}

Matrix ChainComplex::diff(int n) const {
  if (n < lo_ || n > hi_) return Matrix(ring_, rank(n - 1), rank(n));
  if (n == lo_) return Matrix(ring_, 0, rank(n));
  return diffs_[n - lo_];
}

bool ChainComplex::is_zero() const {
  return std::all_of(ranks_.begin(), ranks_.end(), [](std::size_t r) { return r == 0; });
}

std::pair<int, int> ChainComplex::support() const {
  int a = hi_ + 1, b = lo_ - 1;
  for (int n = lo_; n <= hi_; ++n)
    if (rank(n) > 0) {
      a = std::min(a, n);
      b = std::max(b, n);
    }
  return {a, b};
}

bool validate(const ChainComplex& x) {
  for (int n = x.lo(); n <= x.hi(); ++n) {
    Matrix d = x.diff(n);
    if (d.rows() != x.rank(n - 1) || d.cols() != x.rank(n)) return false;
    if (n > x.lo() && !(x.diff(n - 1) * d).is_zero()) return false;
  }
  return true;
}

// ---------------------------------------------------------------- maps

ChainMap::ChainMap(ChainComplex source, ChainComplex target, std::map<int, Matrix> comps)
    : source_(std::move(source)), target_(std::move(target)) {
  if (!(source_.ring() == target_.ring())) throw RingMismatch("chain map between different rings");
  for (auto& [n, m] : comps) {
    if (m.rows() != target_.rank(n) || m.cols() != source_.rank(n))
      throw ShapeMismatch("chain map component in degree " + std::to_string(n));
    if (m.empty()) continue;
    comps_.emplace(n, m.reduced_in(source_.ring()));
  }
}

ChainMap ChainMap::identity(const ChainComplex& x) {
  std::map<int, Matrix> c;
  for (int n = x.lo(); n <= x.hi(); ++n) c.emplace(n, Matrix::identity(x.ring(), x.rank(n)));
  return ChainMap(x, x, c);
}

ChainMap ChainMap::zero(const ChainComplex& s, const ChainComplex& t) { return ChainMap(s, t, {}); }

Matrix ChainMap::comp(int n) const {
  auto it = comps_.find(n);
  if (it != comps_.end()) return it->second;
  return Matrix(source_.ring(), target_.rank(n), source_.rank(n));
}

bool validate(const ChainMap& f) {
  const auto& x = f.source();
  const auto& y = f.target();
  for (const auto& [n, m] : f.comps())
    if (m.rows() != y.rank(n) || m.cols() != x.rank(n)) return false;
  int lo = std::min(x.lo(), y.lo()), hi = std::max(x.hi(), y.hi()) + 1;
  for (int n = lo; n <= hi; ++n)
    if (!(f.comp(n - 1) * x.diff(n) == y.diff(n) * f.comp(n))) return false;
  return true;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  std::map<int, Matrix> c;
  for (const auto& [n, m] : f.comps()) c.emplace(n, g.comp(n) * m);
  return ChainMap(f.source(), g.target(), c);
}

ChainMap operator+(const ChainMap& a, const ChainMap& b) {
  std::map<int, Matrix> c;
  const auto& x = a.source();
  for (int n = x.lo(); n <= x.hi(); ++n) c.emplace(n, a.comp(n) + b.comp(n));
  return ChainMap(a.source(), a.target(), c);
}

ChainMap operator-(const ChainMap& a) {
  std::map<int, Matrix> c;
  for (const auto& [n, m] : a.comps()) c.emplace(n, -m);
  return ChainMap(a.source(), a.target(), c);
}

bool operator==(const ChainMap& a, const ChainMap& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target())) return false;
  const auto& x = a.source();
  for (int n = x.lo(); n <= x.hi(); ++n)
    if (!(a.comp(n) == b.comp(n))) return false;
  return true;
}

ChainComplex shift(const ChainComplex& x, int k) {
  std::vector<std::size_t> ranks;
  std::map<int, Matrix> d;
  mpz_class sign = (k % 2 == 0) ? 1 : -1;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    ranks.push_back(x.rank(n));
    if (n > x.lo()) d.emplace(n + k, sign * x.diff(n));
  }
  return ChainComplex(x.ring(), x.lo() + k, ranks, d);
}

ChainMap shift(const ChainMap& f, int k) {
  std::map<int, Matrix> c;
  for (const auto& [n, m] : f.comps()) c.emplace(n + k, m);
  return ChainMap(shift(f.source(), k), shift(f.target(), k), c);
}

// ---------------------------------------------------------------- cones

Cone cone(const ChainMap& f) {
  const auto& x = f.source();
  const auto& y = f.target();
  const Ring& r = x.ring();
  int lo = std::min(y.lo(), x.lo() + 1), hi = std::max(y.hi(), x.hi() + 1);
  std::vector<std::size_t> ranks;
  std::map<int, Matrix> d;
  for (int n = lo; n <= hi; ++n) {
    ranks.push_back(y.rank(n) + x.rank(n - 1));
    if (n == lo) continue;
    Matrix m(r, y.rank(n - 1) + x.rank(n - 2), y.rank(n) + x.rank(n - 1));
    m.set_block(0, 0, y.diff(n));
    m.set_block(0, y.rank(n), f.comp(n - 1));
    m.set_block(y.rank(n - 1), y.rank(n), -x.diff(n - 1));
    d.emplace(n, m);
  }
  ChainComplex c(r, lo, ranks, d);
  std::map<int, Matrix> inc, pr;
  for (int n = lo; n <= hi; ++n) {
    Matrix i(r, c.rank(n), y.rank(n));
    i.set_block(0, 0, Matrix::identity(r, y.rank(n)));
    inc.emplace(n, i);
    Matrix p(r, x.rank(n - 1), c.rank(n));
    p.set_block(0, y.rank(n), Matrix::identity(r, x.rank(n - 1)));
    pr.emplace(n, p);
  }
  ChainMap incl(y, c, inc);
  ChainMap proj(c, shift(x, 1), pr);
  return {std::move(c), std::move(incl), std::move(proj)};
}

ChainMap cone_map(const ChainMap& f, const ChainMap& f2, const ChainMap& a, const ChainMap& b) {
  Cone c1 = cone(f), c2 = cone(f2);
  const Ring& r = f.source().ring();
  std::map<int, Matrix> comps;
  for (int n = c1.complex.lo(); n <= c1.complex.hi(); ++n) {
    Matrix m(r, c2.complex.rank(n), c1.complex.rank(n));
    m.set_block(0, 0, b.comp(n));
    m.set_block(f2.target().rank(n), f.target().rank(n), a.comp(n - 1));
    comps.emplace(n, m);
  }
  return ChainMap(c1.complex, c2.complex, comps);
}

// ---------------------------------------------------------------- homology

Subquotient homology_sq(const ChainComplex& x, int n) {
  Matrix z = kernel_basis(x.diff(n));
  return Subquotient(z, x.diff(n + 1));
}

AbGroup homology(const ChainComplex& x, int n) { return homology_sq(x, n).group(); }

GroupHom induced_homology_map(const ChainMap& f, int n) {
  return induced_map(homology_sq(f.source(), n), homology_sq(f.target(), n), f.comp(n));
}

bool is_acyclic(const ChainComplex& x) {
  for (int n = x.lo(); n <= x.hi(); ++n)
    if (!homology(x, n).is_trivial()) return false;
  return true;
}

bool is_quasi_isomorphism(const ChainMap& f) { return is_acyclic(cone(f).complex); }

std::pair<int, int> homology_support(const ChainComplex& x) {
  int a = x.hi() + 1, b = x.lo() - 1;
  for (int n = x.lo(); n <= x.hi(); ++n)
    if (!homology(x, n).is_trivial()) {
      a = std::min(a, n);
      b = std::max(b, n);
    }
  return {a, b};
}

// ---------------------------------------------------------------- Hom complex

HomComplex::HomComplex(const ChainComplex& x, const ChainComplex& y) : x_(x), y_(y) {
  if (!(x.ring() == y.ring())) throw RingMismatch("Hom(" + x.ring().name() + ", " + y.ring().name() + ")");
  const Ring& r = x.ring();
  int lo = y.lo() - x.hi(), hi = y.hi() - x.lo();
  std::vector<std::size_t> ranks;
  for (int m = lo; m <= hi; ++m) {
    std::size_t s = 0;
    for (int k = x.lo(); k <= x.hi(); ++k) s += x.rank(k) * y.rank(k + m);
    ranks.push_back(s);
  }
  cx_ = ChainComplex(r, lo, ranks);  // placeholder to answer blocks()
  std::map<int, Matrix> diffs;
  for (int m = lo + 1; m <= hi; ++m) {
    Matrix d(r, cx_.rank(m - 1), cx_.rank(m));
    auto src = blocks(m);
    auto dst = blocks(m - 1);
    auto dst_off = [&](int k) {
      for (const auto& b : dst)
        if (b.k == k) return b.offset;
      throw IndexOverflow("missing Hom block");
    };
    mpz_class sign = (m % 2 == 0) ? -1 : 1;  // -(-1)^m
    for (const auto& blk : src) {
      int k = blk.k;
      std::size_t rx = x.rank(k), ry = y.rank(k + m);
      // f = E_ab : X_k -> Y_{k+m}
      Matrix dy = y.diff(k + m);      // Y_{k+m} -> Y_{k+m-1}
      Matrix dx = x.diff(k + 1);      // X_{k+1} -> X_k
      std::size_t ry1 = y.rank(k + m - 1), rx1 = x.rank(k + 1);
      for (std::size_t a = 0; a < ry; ++a)
        for (std::size_t b = 0; b < rx; ++b) {
          std::size_t col = blk.offset + a * rx + b;
          if (ry1 > 0) {
            std::size_t off = dst_off(k);  // block X_k -> Y_{k+m-1}
            for (std::size_t a2 = 0; a2 < ry1; ++a2)
              if (dy(a2, a) != 0) d.raw(off + a2 * rx + b, col) += dy(a2, a);
          }
          if (rx1 > 0) {
            std::size_t off = dst_off(k + 1);  // block X_{k+1} -> Y_{k+m}
            for (std::size_t b2 = 0; b2 < rx1; ++b2)
              if (dx(b, b2) != 0) d.raw(off + a * rx1 + b2, col) += sign * dx(b, b2);
          }
        }
    }
    d.normalize();
    diffs.emplace(m, d);
  }
  cx_ = ChainComplex(r, lo, ranks, diffs);
}

std::vector<HomComplex::Block> HomComplex::blocks(int m) const {
  std::vector<Block> out;
  std::size_t off = 0;
  for (int k = x_.lo(); k <= x_.hi(); ++k) {
    std::size_t sz = x_.rank(k) * y_.rank(k + m);
    if (sz == 0) continue;
    out.push_back({k, off});
    off += sz;
  }
  return out;
}

Vec HomComplex::pack(int m, const std::map<int, Matrix>& bl) const {
  Vec v(cx_.rank(m));
  for (const auto& b : blocks(m)) {
    auto it = bl.find(b.k);
    if (it == bl.end()) continue;
    const Matrix& f = it->second;
    std::size_t rx = x_.rank(b.k), ry = y_.rank(b.k + m);
    if (f.rows() != ry || f.cols() != rx) throw ShapeMismatch("Hom block shape");
    for (std::size_t a = 0; a < ry; ++a)
      for (std::size_t c = 0; c < rx; ++c) v[b.offset + a * rx + c] = f(a, c);
  }
  return v;
}

std::map<int, Matrix> HomComplex::unpack(int m, const Vec& v) const {
  std::map<int, Matrix> out;
  if (v.size() != cx_.rank(m)) throw ShapeMismatch("Hom vector length");
  for (const auto& b : blocks(m)) {
    std::size_t rx = x_.rank(b.k), ry = y_.rank(b.k + m);
    Matrix f(x_.ring(), ry, rx);
    for (std::size_t a = 0; a < ry; ++a)
      for (std::size_t c = 0; c < rx; ++c) f.set(a, c, v[b.offset + a * rx + c]);
    out.emplace(b.k, std::move(f));
  }
  return out;
}

Subquotient derived_hom_sq(const HomComplex& h, int n) { return homology_sq(h.complex(), n); }

AbGroup derived_hom(const ChainComplex& x, const ChainComplex& y, int n) {
  return derived_hom_sq(HomComplex(x, y), n).group();
}

GroupHom induced_map_on_derived_hom(const HomComplex& from, const Subquotient& from_sq, const HomComplex& to,
                                    const Subquotient& to_sq, const ChainMap& f, const ChainMap& g, int n) {
  const AbGroup& s = from_sq.group();
  Matrix m(s.ring(), to_sq.group().rank(), s.rank());
  Matrix lifts = from_sq.lifts();
  const auto& x2 = to.source();
  for (std::size_t j = 0; j < s.rank(); ++j) {
    auto blocks = from.unpack(n, lifts.column(j));
    std::map<int, Matrix> out;
    for (int k = x2.lo(); k <= x2.hi(); ++k) {
      auto it = blocks.find(k);
      if (it == blocks.end()) continue;
      out.emplace(k, g.comp(k + n) * it->second * f.comp(k));
    }
    m.set_column(j, to_sq.coordinates(to.pack(n, out)));
  }
  return GroupHom(s, to_sq.group(), m);
}

GroupHom induced_map_on_derived_hom(const ChainMap& f, const ChainMap& g, int n) {
  HomComplex from(f.target(), g.source()), to(f.source(), g.target());
  return induced_map_on_derived_hom(from, derived_hom_sq(from, n), to, derived_hom_sq(to, n), f, g, n);
}

ChainMap chain_map_from_hom(const HomComplex& h, const Vec& cycle) {
  return ChainMap(h.source(), h.target(), h.unpack(0, cycle));
}

// ---------------------------------------------------------------- generators

std::pair<Matrix, Matrix> random_unimodular(std::mt19937_64& rng, Ring ring, std::size_t n) {
  Matrix p = Matrix::identity(ring, n), pinv = p;
  if (n < 2) {
    if (n == 1 && ring.is_field() && ring.characteristic() > 2) {
      std::uniform_int_distribution<unsigned long> u(1, ring.characteristic() - 1);
      mpz_class c = u(rng);
      p.set(0, 0, c);
      pinv.set(0, 0, ring.inverse(c));
    }
    return {p, pinv};
  }
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  std::size_t steps = 2 * n;
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t i = idx(rng), t = idx(rng);
    if (i == t) continue;
    mpz_class c = coef(rng);
    // p <- (I + c e_i e_t^T) p ; pinv <- pinv (I - c e_i e_t^T)
    for (std::size_t j = 0; j < n; ++j) p.raw(i, j) += c * p(t, j);
    for (std::size_t r = 0; r < n; ++r) pinv.raw(r, t) -= c * pinv(r, i);
    p.normalize();
    pinv.normalize();
  }
  return {p, pinv};
}

ChainComplex random_complex(std::mt19937_64& rng, Ring ring, int lo, int hi, std::size_t max_rank) {
  if (hi < lo) std::swap(lo, hi);
  int len = hi - lo + 1;
  std::vector<std::size_t> b(len), h(len), e(len), ranks(len);
  for (int i = 0; i < len; ++i) {
    e[i] = i == 0 ? 0 : b[i - 1];
    std::size_t room = max_rank - std::min(max_rank, e[i]);
    h[i] = std::uniform_int_distribution<std::size_t>(0, room)(rng);
    b[i] = i == len - 1 ? 0 : std::uniform_int_distribution<std::size_t>(0, room - h[i])(rng);
    ranks[i] = b[i] + h[i] + e[i];
  }
  std::uniform_int_distribution<long> tor(1, 4);
  std::vector<std::pair<Matrix, Matrix>> bases;
  for (int i = 0; i < len; ++i) bases.push_back(random_unimodular(rng, ring, ranks[i]));
  std::map<int, Matrix> diffs;
  for (int i = 1; i < len; ++i) {
    // layout in degree n: [B | H | E]
    Matrix d(ring, ranks[i - 1], ranks[i]);
    for (std::size_t t = 0; t < e[i]; ++t) {
      long v = tor(rng);
      d.set(t, b[i] + h[i] + t, v);
    }
    diffs.emplace(lo + i, bases[i - 1].first * d * bases[i].second);
  }
  return ChainComplex(ring, lo, ranks, diffs);
}

ChainComplex random_complex(std::uint64_t seed, Ring ring, int lo, int hi, std::size_t max_rank) {
  std::mt19937_64 rng(seed);
  return random_complex(rng, ring, lo, hi, max_rank);
}

ChainMap random_chain_map(std::mt19937_64& rng, const ChainComplex& x, const ChainComplex& y, long bound) {
  HomComplex h(x, y);
  Matrix z = kernel_basis(h.complex().diff(0));
  std::uniform_int_distribution<long> c(-bound, bound);
  Vec v(z.rows());
  for (std::size_t j = 0; j < z.cols(); ++j) {
    mpz_class a = c(rng);
    if (a == 0) continue;
    for (std::size_t i = 0; i < z.rows(); ++i) v[i] += a * z(i, j);
  }
  for (auto& t : v) x.ring().reduce(t);
  return chain_map_from_hom(h, v);
}

}  // namespace tmodel
