#pragma once

#include <climits>
#include <map>
#include <optional>

#include "tmodel/chain.hpp"

namespace tmodel {

/// A truncation together with its comparison map: for τ≥n the anchor is the
/// inclusion τ≥n X -> X, for the free τ≤n model it is X -> τ≤n X.
struct Truncation {
  ChainComplex complex;
  ChainMap anchor;
};

/// Subcomplex with degrees > n copied and ker d_n in degree n.
Truncation truncate_above(const ChainComplex& x, int n);
/// cone(τ≥n+1 X -> X): free, H_i = H_i(X) for i <= n and 0 above.
Truncation truncate_below_free(const ChainComplex& x, int n);

/// τ≥n f between the given truncations (recomputed when omitted).
ChainMap truncate_above_map(const ChainMap& f, const Truncation& tx, const Truncation& ty);
ChainMap truncate_above_map(const ChainMap& f, int n);
ChainMap truncate_below_map(const ChainMap& f, int n);

/// Degreewise solution c of mono ∘ c = g (g must factor through the mono).
ChainMap factor_through_mono(const ChainMap& g, const ChainMap& mono);

struct TruncationTower {
  ChainComplex base;
  std::map<int, Truncation> below;       // n in [lo, hi]
  std::map<int, Truncation> above;       // n in [lo, hi + 1]
  std::map<int, ChainMap> maps_below;    // key n: T≤n -> T≤n-1, n in (lo, hi]
  std::map<int, ChainMap> maps_above;    // key n: T≥n+1 -> T≥n, n in [lo, hi]
};

TruncationTower truncation_tower(const ChainComplex& x);

AbGroup heart_homology(const ChainComplex& x, int n);
/// cone(τ≥n+1 X -> τ≥n X) has homology H_n(X) in degree n and nothing else.
bool layer_triangle_check(const ChainComplex& x, int n);

inline constexpr int kPlusInfinity = INT_MAX;
inline constexpr int kMinusInfinity = INT_MIN;

struct MapClassification {
  int max_n_equivalence;     // kPlusInfinity when every n works
  int min_co_n_equivalence;  // kMinusInfinity when every n works
  bool is_weak_equivalence;
  bool operator==(const MapClassification&) const = default;
};

/// From the homology of the cone: f is an n-equivalence iff H_i(cone f) = 0 for
/// i <= n, a co-n-equivalence iff H_i(cone f) = 0 for i > n.
MapClassification classify_map(const ChainMap& f);
/// Same answer from induced homology maps only (iso below n and onto at n, dually
/// injective at n and iso above). Used as an independent cross-check.
MapClassification classify_map_by_homology(const ChainMap& f);
bool is_n_equivalence(const ChainMap& f, int n);
bool is_co_n_equivalence(const ChainMap& f, int n);

/// Degreewise split mono with free cokernel.
bool is_cofibration(const ChainMap& f);
/// Degreewise surjection.
bool is_fibration(const ChainMap& f);
bool is_n_cofibration(const ChainMap& f, int n);
bool is_co_n_fibration(const ChainMap& f, int n);

struct Factorization {
  ChainMap i;  // cofibration and n-equivalence
  ChainMap p;  // degreewise surjective co-n-equivalence
};

/// f = p ∘ i. Acyclic disks make p surjective, then cells in degrees >= n+1 with
/// p = 0 kill H_k(ker p) for k >= n. Postconditions are checked before returning.
Factorization factor_n(const ChainMap& f, int n);

/// h with h∘i = top and p∘h = bottom. Throws PreconditionViolated unless i is an
/// n-cofibration, p a co-n-fibration and the square commutes.
std::optional<ChainMap> find_lift(const ChainMap& i, const ChainMap& p, const ChainMap& top,
                                  const ChainMap& bottom, int n);

/// Free two-term resolution of A in degrees 1, 0 (over F_p: A in degree 0).
ChainComplex coefficient_complex(const AbGroup& a);
/// H^p(X; A) = [X, K(A)]_{-p}.
AbGroup cohomology_with_coefficients(const ChainComplex& x, const AbGroup& a, int p);

/// For an n-cofibration f, Σ^j f is an (n+j)-cofibration (cofiber in M≥n+1+j).
bool pushout_product_check(const ChainMap& f, int n, int j);

}  // namespace tmodel
