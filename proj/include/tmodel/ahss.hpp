#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tmodel/prohomotopy.hpp"

namespace tmodel {

using Bidegree = std::pair<int, int>;  // (p, q)

/// D_{p,q} = [X, τ≥q Y]_{p+q}, E_{p,q} = [X, L_q]_{p+q} with L_q = cone(τ≥q+1 Y -> τ≥q Y).
/// i: D_{p,q} -> D_{p+1,q-1}, j: D_{p,q} -> E_{p,q}, k: E_{p,q} -> D_{p-2,q+1}.
/// Stored over p in [p_lo, p_hi] and q in [q_lo, q_hi] (the homology window of Y);
/// E vanishes outside, D vanishes above q_hi and is constant (via i) below q_lo.
struct ExactCouple {
  ChainComplex x, y;
  std::map<int, ChainComplex> layers;  // L_q
  int p_lo = 0, p_hi = -1, q_lo = 0, q_hi = -1;
  std::map<Bidegree, AbGroup> d, e;
  std::map<Bidegree, GroupHom> i;  // only where q - 1 >= q_lo
  std::map<Bidegree, GroupHom> j, k;

  bool in_window(int p, int q) const { return p >= p_lo && p <= p_hi && q >= q_lo && q <= q_hi; }
  AbGroup D(int p, int q) const;
  AbGroup E(int p, int q) const;
  /// i^m out of D_{p,q}; requires q - m >= q_lo.
  GroupHom i_power(int p, int q, int m) const;
};

ExactCouple build_exact_couple(const ChainComplex& x, const ChainComplex& y);
/// Image equals kernel at every node whose three maps lie inside the window.
bool couple_is_exact(const ExactCouple& c);

/// E_r as subquotients Z_r / B_r of the E² groups, with d_r of bidegree (-r, r-1).
struct Page {
  Ring ring;
  int r = 2;
  std::map<Bidegree, Subquotient> sq;
  std::map<Bidegree, GroupHom> diff;  // source bidegree -> d_r

  AbGroup group(int p, int q) const;
};

/// Page r from the E² couple: Z_r = k⁻¹(im i^{r-2}), B_r = j(ker i^{r-2}).
Page page(const ExactCouple& c, int r);
/// The next page, checked against ker d_r / im d_r slot by slot; throws
/// ExactnessViolation if d_r∘d_r ≠ 0 or the identification fails.
Page derive(const ExactCouple& c, const Page& prev);

struct SpectralSequence {
  ExactCouple couple;
  std::vector<Page> pages;  // r = 2 .. r_max, the last one is E∞
  int r_max = 2;            // q-window width + 2
  int stable_page = 2;      // first r with d_{r'} = 0 for all r' >= r
  const Page& e_infinity() const { return pages.back(); }
};

SpectralSequence run_to_stable(const ExactCouple& c);
SpectralSequence run_to_stable(const ChainComplex& x, const ChainComplex& y);

bool e2_identification_check(const ExactCouple& c);
bool e2_identification_check(const ChainComplex& x, const ChainComplex& y);

struct FiltrationStep {
  int q;
  Matrix generators;  // columns in canonical coordinates of [X, Y]_n
  AbGroup group;      // F_q itself
};

/// F_q = im([X, τ≥q Y]_n -> [X, Y]_n) for q in [q_lo, q_hi + 1].
std::vector<FiltrationStep> abutment_filtration(const ChainComplex& x, const ChainComplex& y, int n);
/// F_q / F_{q+1}, indexed by q.
std::map<int, AbGroup> associated_graded(const ChainComplex& x, const ChainComplex& y, int n);

struct ConvergenceReport {
  bool lim_ok = true, lim1_ok = true, colim_ok = true;
  int stable_page = 2;
  std::map<Bidegree, bool> graded_comparison;  // E∞_{p,q} ≅ gr_q [X,Y]_{p+q}
  bool all_iso() const;
  bool all_ok() const { return lim_ok && lim1_ok && colim_ok && all_iso(); }
};

ConvergenceReport convergence_check(const ChainComplex& x, const ChainComplex& y);
ConvergenceReport convergence_check(const SpectralSequence& ss);

struct ProAhssResult {
  std::map<Bidegree, std::optional<AbGroup>> e2;
  std::map<int, std::optional<AbGroup>> abutment;
  std::map<Bidegree, Verdict> comparison;  // colim E∞ vs colim gr, slotwise
  bool all_iso() const;
};

/// Pro-AHSS for a tower X against constant bounded Y. n_window limits the abutment
/// degrees reported; the default covers the couple window.
ProAhssResult pro_ahss(const ComplexTower& x, const ChainComplex& y,
                       std::optional<std::pair<int, int>> n_window = std::nullopt);

}  // namespace tmodel
