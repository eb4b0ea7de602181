#pragma once

// Concrete groups of order p^5 with generators f1..f5, control groups, and
// the parameter and counting formulas attached to the families.
//
// Shared commutator relations of every family: [f2,f1] = f3, [f3,f1] = f4,
// [f4,f1] = [f3,f2] = f5, all other commutators trivial.

#include <string>
#include <vector>

#include "b0kit/pcgroup.hpp"

namespace b0kit::families {

enum class Family {
  G243_28,
  G243_29,
  G243_30,
  G1,  // G(1|p)
  G2,  // G_r(2|p)
  G3,  // G_r(3|p)
  G28_IMPOSTOR,
  G29_IMPOSTOR,
  G30_IMPOSTOR,
};

struct FamilySpec {
  Family family;
  int p = 3;
  int r = 0;

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

bool is_prime(long long n);
/// Least a >= 2 of multiplicative order p - 1 modulo p.
int smallest_primitive_root(int p);
int c2(int p);
int c3(int p);
/// 1 + gcd(4, p-1) + gcd(3, p-1)
int b0_family_count(int p);
/// 2p + 61 + gcd(4, p-1) + 2 gcd(3, p-1)
int bagnera_count(int p);

/// Throws std::invalid_argument for a bad (family, p, r) combination.
void validate(const FamilySpec& spec);
PcPresentation build(const FamilySpec& spec);

/// Display name such as "G(243,28)", "G(1|5)", "G_1(2|7)" or "G(28|5)".
std::string name(const FamilySpec& spec);
std::string tag(Family f);
/// Accepts tags such as "G243_28", "G2", "G28_IMPOSTOR" (case-insensitive).
Family parse_tag(const std::string& tag);

/// Members expected to have non-trivial Bogomolov multiplier: the three
/// groups of order 243 at p = 3, and G(1|p), G_r(2|p), G_r(3|p) for p >= 5.
std::vector<FamilySpec> members(int p);

/// Presentations the paper calls "not a group of order 3^5".
std::vector<FamilySpec> degenerate_p3();

// ---- Controls ------------------------------------------------------------

struct NamedGroup {
  std::string name;
  PcPresentation presentation;
};

PcPresentation cyclic(int n);
/// C_p^k
PcPresentation elementary_abelian(int p, int k);
/// Non-abelian of order p^3 and exponent p (p odd).
PcPresentation heisenberg(int p);
/// Non-abelian of order p^3 with a cyclic subgroup of index p.
PcPresentation modular(int p);
PcPresentation dihedral8();
PcPresentation quaternion8();
PcPresentation dihedral16();
PcPresentation quaternion16();

/// Fixed control corpus: abelian groups, order-p^3 groups, 2-groups of
/// order 8 and 16, products, and a few larger abelian/metabelian groups.
std::vector<NamedGroup> controls();

/// Order-p^4 groups derived from the families: the quotient of each member
/// by <f5>, plus the collapsed impostors at p >= 5.
std::vector<NamedGroup> order_p4_controls(int p);

}  // namespace b0kit::families
