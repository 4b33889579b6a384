#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "tmodel/abgroup.hpp"

namespace tmodel {

/// Bounded complex of finitely generated free modules, homological grading.
/// diff(n) : C_n -> C_{n-1} has shape rank(n-1) x rank(n).
class ChainComplex {
 public:
  ChainComplex() = default;
  /// ranks[i] is the rank in degree lo + i; diffs maps degree -> matrix, missing means zero.
  ChainComplex(Ring ring, int lo, std::vector<std::size_t> ranks, const std::map<int, Matrix>& diffs = {});

  static ChainComplex zero(Ring ring) { return ChainComplex(ring, 0, {0}); }
  /// R^rank concentrated in one degree.
  static ChainComplex concentrated(Ring ring, int degree, std::size_t rank = 1);
  /// R --d--> R in degrees n+1, n; d = 2 gives the Moore complex M2.
  static ChainComplex moore(Ring ring, const mpz_class& d, int n = 0);

  const Ring& ring() const { return ring_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  std::size_t rank(int n) const;
  /// Zero matrix of the right shape outside the stored range.
  Matrix diff(int n) const;
  const Matrix& diff_ref(int n) const { return diffs_[n - lo_]; }
  bool is_zero() const;
  /// Smallest interval of degrees carrying nonzero modules (empty: lo > hi).
  std::pair<int, int> support() const;

  friend bool operator==(const ChainComplex& a, const ChainComplex& b) {
    return a.ring_ == b.ring_ && a.lo_ == b.lo_ && a.ranks_ == b.ranks_ && a.diffs_ == b.diffs_;
  }

 private:
  Ring ring_;
  int lo_ = 0, hi_ = 0;
  std::vector<std::size_t> ranks_{0};
  std::vector<Matrix> diffs_{Matrix()};
};

/// d∘d = 0 and matching shapes.
bool validate(const ChainComplex& x);

class ChainMap {
 public:
  ChainMap() = default;
  ChainMap(ChainComplex source, ChainComplex target, std::map<int, Matrix> comps);

  static ChainMap identity(const ChainComplex& x);
  static ChainMap zero(const ChainComplex& s, const ChainComplex& t);

  const ChainComplex& source() const { return source_; }
  const ChainComplex& target() const { return target_; }
  /// Component in degree n, zero outside the stored range.
  Matrix comp(int n) const;
  const std::map<int, Matrix>& comps() const { return comps_; }

 private:
  ChainComplex source_, target_;
  std::map<int, Matrix> comps_;
};

/// Commutes with differentials exactly and shapes match.
bool validate(const ChainMap& f);
ChainMap compose(const ChainMap& g, const ChainMap& f);
ChainMap operator+(const ChainMap& a, const ChainMap& b);
ChainMap operator-(const ChainMap& a);
bool operator==(const ChainMap& a, const ChainMap& b);

/// (Σ^k X)_n = X_{n-k}, differential times (-1)^k.
ChainComplex shift(const ChainComplex& x, int k);
ChainMap shift(const ChainMap& f, int k);

struct Cone {
  ChainComplex complex;
  ChainMap incl;  // Y -> cone
  ChainMap proj;  // cone -> ΣX
};
/// cone(f)_n = Y_n ⊕ X_{n-1}, d = [[dY, f], [0, -dX]].
Cone cone(const ChainMap& f);
/// Functoriality of cones for a commuting square g∘f = f'∘a (b on targets, a on sources).
ChainMap cone_map(const ChainMap& f, const ChainMap& f2, const ChainMap& a, const ChainMap& b);

/// H_n(X) as ker d_n / im d_{n+1} inside X_n.
Subquotient homology_sq(const ChainComplex& x, int n);
AbGroup homology(const ChainComplex& x, int n);
GroupHom induced_homology_map(const ChainMap& f, int n);
bool is_acyclic(const ChainComplex& x);
bool is_quasi_isomorphism(const ChainMap& f);
/// Degrees where homology is nonzero, as [first, last]; empty when first > last.
std::pair<int, int> homology_support(const ChainComplex& x);

/// Hom(X, Y): degree m is ⊕_k Hom(X_k, Y_{k+m}), D(f) = d_Y f - (-1)^m f d_X.
class HomComplex {
 public:
  HomComplex(const ChainComplex& x, const ChainComplex& y);

  const ChainComplex& complex() const { return cx_; }
  const ChainComplex& source() const { return x_; }
  const ChainComplex& target() const { return y_; }

  /// Blocks f_k : X_k -> Y_{k+m} packed into a coordinate vector of degree m.
  Vec pack(int m, const std::map<int, Matrix>& blocks) const;
  std::map<int, Matrix> unpack(int m, const Vec& v) const;

 private:
  struct Block {
    int k;
    std::size_t offset;
  };
  std::vector<Block> blocks(int m) const;

  ChainComplex x_, y_, cx_;
};

/// [X, Y]_n = H_n(Hom(X, Y)); with this grading [Z[0], Y]_n = H_n(Y) and
/// [X, ΣY]_n = [X, Y]_{n-1}.
AbGroup derived_hom(const ChainComplex& x, const ChainComplex& y, int n);
Subquotient derived_hom_sq(const HomComplex& h, int n);
/// h ↦ g∘h∘f : [X, Y]_n -> [X', Y']_n for f : X' -> X, g : Y -> Y'.
GroupHom induced_map_on_derived_hom(const ChainMap& f, const ChainMap& g, int n);
/// Same with prebuilt Hom complexes (must match f, g).
GroupHom induced_map_on_derived_hom(const HomComplex& from, const Subquotient& from_sq,
                                    const HomComplex& to, const Subquotient& to_sq, const ChainMap& f,
                                    const ChainMap& g, int n);
/// A chain map X -> Y representing the degree-0 class c of [X, Y]_0.
ChainMap chain_map_from_hom(const HomComplex& h, const Vec& cycle);

/// Random complex: canonical blocks d: E_n -> B_{n-1} with diagonal entries in [1,4],
/// conjugated by random unimodular changes of basis. Reproducible for a seed.
ChainComplex random_complex(std::uint64_t seed, Ring ring, int lo, int hi, std::size_t max_rank);
ChainComplex random_complex(std::mt19937_64& rng, Ring ring, int lo, int hi, std::size_t max_rank);
/// Random integer combination of a basis of chain maps X -> Y.
ChainMap random_chain_map(std::mt19937_64& rng, const ChainComplex& x, const ChainComplex& y, long bound = 2);
/// Random invertible matrix together with its inverse.
std::pair<Matrix, Matrix> random_unimodular(std::mt19937_64& rng, Ring ring, std::size_t n);

}  // namespace tmodel
