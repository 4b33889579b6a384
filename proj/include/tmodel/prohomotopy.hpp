#pragma once

#include <optional>
#include <string>

#include "tmodel/pro.hpp"
#include "tmodel/tstruct.hpp"

namespace tmodel {

enum class HStarKind { WeakEquivalence, NotWeakEquivalence, Unknown };
std::string to_string(HStarKind k);

struct HStarVerdict {
  HStarKind verdict;
  std::string reason;            // failing H_n or window, when not a weak equivalence
  std::optional<int> m_witness;  // uniform m with every component an m-equivalence
  std::size_t budget;
};

/// Pro-Whitehead test: essentially levelwise m-equivalence for some m, and
/// H_n(f) a pro-isomorphism for every n.
HStarVerdict is_hstar_weak_equivalence(const ComplexProMap& f, std::size_t budget);

struct Replacement {
  ComplexTower tower;
  ComplexProMap map;  // Y -> replacement, level
};

/// Diagonal Z_k = T≤(n0+k) Y_k with n0 the lowest degree of any entry; the
/// diagonal freezes once the truncation no longer cuts any homology.
Replacement postnikov_replacement(const ComplexTower& y);

/// Every structure map degreewise surjective and every entry bounded above.
bool is_hstar_fibrant(const ComplexTower& y);

/// Y'_{s+1} = Y_{s+1} ⊕ D(Y'_s) with D the acyclic disk on Y'_s. Only towers with a
/// ConstantFrom tail, or whose tail map is already degreewise surjective, admit a
/// finite presentation; others throw PreconditionViolated.
Replacement make_fibrant(const ComplexTower& y);

/// lim_t colim_s [X_s, Y_t]_0 for X levelwise in M≥n and Y levelwise in M≤n.
ProHomResult heart_hom(const ComplexTower& x, const ComplexTower& y, int n, std::size_t budget);

/// colim_s [X_s, Y]_n.
ProHomResult hom_to_constant(const ComplexTower& x, const ChainComplex& y, int n);

struct HomFromConstant {
  LimResult degree_n;        // lim / lim¹ of G_k = [X, Z_k]_n
  Lim1 obstruction;          // lim¹ of [X, Z_k]_{n+1}, the kernel of [X, holim Z]_n -> lim G
  std::optional<AbGroup> value;  // exact only when lim is known and the obstruction vanishes
  GroupTower tower;          // G_k itself
};
HomFromConstant hom_from_constant(const ChainComplex& x, const ComplexTower& y, int n, std::size_t budget);

/// Every component a degreewise split mono with free cokernel.
bool is_levelwise_cofibration(const ComplexProMap& f);

/// H_n of a complex tower, with induced structure maps.
GroupTower homology_tower(const ComplexTower& x, int n);
GroupProMap homology_pro_map(const ComplexProMap& f, int n);

/// Lowest and highest degree carrying homology in any entry (lo > hi when none).
std::pair<int, int> homology_window(const ComplexTower& x);

/// T≤n+1 X -> T≤n X.
ChainMap truncation_step(const ChainComplex& x, int n);

}  // namespace tmodel
