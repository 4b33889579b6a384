#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmodel/lattice.hpp"

namespace tmodel {

/// A finitely generated module over Z or F_p, normalized to Smith form.
///
/// Canonical generators come first as torsion (orders d1 | d2 | ...), then free.
/// Over F_p every canonical generator is free and free_rank() is the dimension.
/// The original presentation is kept together with the change of basis so that
/// elements written on the presentation generators can be moved in and out.
class AbGroup {
 public:
  AbGroup() = default;

  static AbGroup from_presentation(Ring ring, std::size_t ngens, const Matrix& relations);
  static AbGroup free(Ring ring, std::size_t rank);
  static AbGroup from_invariants(Ring ring, const Vec& torsion, std::size_t free_rank);
  static AbGroup zero(Ring ring) { return free(ring, 0); }

  const Ring& ring() const { return ring_; }
  const Vec& torsion() const { return torsion_; }
  std::size_t free_rank() const { return free_rank_; }
  /// Number of canonical generators.
  std::size_t rank() const { return torsion_.size() + free_rank_; }
  bool is_trivial() const { return rank() == 0; }
  /// Order of canonical generator i; 0 means free over the ring.
  mpz_class order(std::size_t i) const { return i < torsion_.size() ? torsion_[i] : mpz_class(0); }
  Vec orders() const;
  /// Cardinality when finite (over F_p: p^dim); nullopt when infinite.
  std::optional<mpz_class> cardinality() const;

  std::size_t presentation_gens() const { return ngens_; }
  const Matrix& presentation() const { return relations_; }
  const Matrix& to_canonical() const { return to_canonical_; }
  const Matrix& from_canonical() const { return from_canonical_; }

  /// Reduce canonical coordinates into standard representatives.
  Vec reduce(Vec c) const;
  /// Canonical coordinates of an element written on presentation generators.
  Vec from_presentation_coords(const Vec& x) const { return reduce(to_canonical_ * x); }

  bool isomorphic(const AbGroup& o) const {
    return ring_ == o.ring_ && torsion_ == o.torsion_ && free_rank_ == o.free_rank_;
  }

  /// "0", "Z", "Z^2 + Z/2 + Z/4", "F2^3".
  std::string to_string() const;

 private:
  Ring ring_;
  std::size_t ngens_ = 0;
  Matrix relations_;
  Vec torsion_;
  std::size_t free_rank_ = 0;
  Matrix to_canonical_;
  Matrix from_canonical_;
};

/// Homomorphism given by its matrix on canonical generators.
class GroupHom {
 public:
  GroupHom() = default;
  /// Reduces entries and validates that relations are respected.
  GroupHom(AbGroup source, AbGroup target, Matrix m);

  static GroupHom zero(const AbGroup& s, const AbGroup& t);
  static GroupHom identity(const AbGroup& a);
  /// From a matrix acting on presentation generators.
  static GroupHom from_presentation_matrix(const AbGroup& s, const AbGroup& t, const Matrix& m);

  const AbGroup& source() const { return source_; }
  const AbGroup& target() const { return target_; }
  const Matrix& matrix() const { return m_; }

  Vec apply(const Vec& c) const { return target_.reduce(m_ * c); }
  bool is_zero() const { return m_.is_zero(); }

  friend bool operator==(const GroupHom& a, const GroupHom& b) { return a.m_ == b.m_; }

 private:
  AbGroup source_, target_;
  Matrix m_;
};

GroupHom compose(const GroupHom& g, const GroupHom& f);
GroupHom operator+(const GroupHom& a, const GroupHom& b);
GroupHom operator-(const GroupHom& a);

/// L/K for lattices K ⊆ L ⊆ R^n given by generating columns.
class Subquotient {
 public:
  Subquotient() = default;
  Subquotient(const Matrix& l_gens, const Matrix& k_gens);

  const AbGroup& group() const { return group_; }
  std::size_t ambient() const { return ambient_; }
  const Matrix& basis() const { return basis_; }

  bool contains(const Vec& v) const { return sys_.contains(v); }
  /// Canonical coordinates of v ∈ L; throws ContainmentViolation otherwise.
  Vec coordinates(const Vec& v) const;
  /// A representative in L of the class with canonical coordinates c.
  Vec lift(const Vec& c) const;
  /// Matrix whose columns are lifts of the canonical generators.
  Matrix lifts() const;

 private:
  std::size_t ambient_ = 0;
  Matrix basis_;
  LinearSystem sys_;
  AbGroup group_;
};

/// The map L1/K1 → L2/K2 induced by a matrix F sending L1 into L2 and K1 into K2.
GroupHom induced_map(const Subquotient& from, const Subquotient& to, const Matrix& f);

struct SubgroupResult {
  Subquotient sq;
  GroupHom map;  // inclusion (kernel, image) or projection (cokernel, subquotient)
};

SubgroupResult kernel(const GroupHom& f);
SubgroupResult image(const GroupHom& f);
SubgroupResult cokernel(const GroupHom& f);
/// im S / im T inside A, with the projection from S.source(); throws
/// ContainmentViolation when im T is not contained in im S.
SubgroupResult subquotient(const AbGroup& a, const GroupHom& s, const GroupHom& t);

bool is_injective(const GroupHom& f);
bool is_surjective(const GroupHom& f);
bool is_isomorphism(const GroupHom& f);

/// Every column of x (canonical coordinates in a) lies in the subgroup generated by y.
bool subgroup_contained(const AbGroup& a, const Matrix& x, const Matrix& y);
bool same_subgroup(const AbGroup& a, const Matrix& x, const Matrix& y);
/// im f == ker g.
bool exact_at(const GroupHom& f, const GroupHom& g);

/// Some x with f(x) = y, or nullopt.
std::optional<Vec> preimage(const GroupHom& f, const Vec& y);

/// Hom(A, B) together with its decoding to and from GroupHom.
class HomGroup {
 public:
  HomGroup(const AbGroup& a, const AbGroup& b);
  const AbGroup& group() const { return group_; }
  const AbGroup& source() const { return a_; }
  const AbGroup& target() const { return b_; }
  GroupHom to_hom(const Vec& c) const;
  Vec from_hom(const GroupHom& h) const;

 private:
  struct Slot {
    std::size_t i, j;
    mpz_class gen;  // image of generator j lands at gen * e_i
  };
  AbGroup a_, b_;
  std::vector<Slot> slots_;
  AbGroup group_;
};

AbGroup hom_group(const AbGroup& a, const AbGroup& b);

/// Constraint post ∘ g ∘ pre = rhs on an unknown g: A → B. Empty post/pre mean identity.
struct HomConstraint {
  std::optional<GroupHom> post;
  std::optional<GroupHom> pre;
  GroupHom rhs;
};

std::optional<GroupHom> solve_hom_constraints(const AbGroup& a, const AbGroup& b,
                                              const std::vector<HomConstraint>& cs);

/// Solve M x ≡ y modulo the target orders (M over canonical coordinates).
std::optional<Vec> solve_modulo(const Matrix& m, const Vec& target_orders, const Vec& y);

}  // namespace tmodel
