#pragma once

// Schur multiplier through a cover with central tails, commutator lifts,
// and character groups of abelian normal subgroups with the conjugation
// action of the ambient group.

#include <cstdint>
#include <vector>

#include "b0kit/howell.hpp"
#include "b0kit/linalg.hpp"
#include "b0kit/pcgroup.hpp"

namespace b0kit::homology {

/// Base presentation with one central tail per relation and the lattice of
/// tail relations forced by the overlaps. Z^m / lattice = M(G) x Z^n.
struct CoverPresentation {
  PcPresentation base;
  TailLayout layout;
  linalg::IntMatrix relation_lattice;  // rows over Z^m, one per overlap (zero rows kept)
  std::vector<Overlap> overlaps;

  int tail_count() const noexcept { return layout.count; }
};

/// Overlaps are evaluated concurrently; the row order follows overlaps().
CoverPresentation build_cover(const PcPresentation& p);

/// Cover plus everything needed to map tail vectors into M(G).
class Cover {
 public:
  explicit Cover(const PcPresentation& p);

  Cover(const Cover&) = delete;
  Cover& operator=(const Cover&) = delete;

  const CoverPresentation& presentation() const noexcept { return cover_; }
  const PcPresentation& base() const noexcept { return cover_.base; }
  const Collector& collector() const noexcept { return collector_; }
  const linalg::TorsionCoordinates& coordinates() const noexcept { return coords_; }
  /// Torsion part of Z^m / lattice.
  const AbelianInvariants& multiplier() const noexcept { return multiplier_; }
  int free_rank() const noexcept { return free_rank_; }

  /// Raw tail vector of [x~, y~] for lifts with zero tails, by collection.
  /// Throws std::invalid_argument when x and y do not commute.
  std::vector<std::int64_t> lift_commutator_raw(const Element& x, const Element& y) const;
  /// Class of the lift in M(G) (torsion coordinates). Throws
  /// std::logic_error if the lift is not torsion modulo the lattice.
  std::vector<std::uint64_t> lift_commutator(const Element& x, const Element& y) const;
  std::vector<std::uint64_t> canonical(const std::vector<std::int64_t>& tails) const;

 private:
  CoverPresentation cover_;
  Collector collector_;
  linalg::TorsionCoordinates coords_;
  AbelianInvariants multiplier_;
  int free_rank_ = 0;
};

AbelianInvariants schur_multiplier(const PcPresentation& p);

// ---- Characters ------------------------------------------------------------

/// Hom(N, Q/Z) for an abelian normal subgroup N of G, with values stored as
/// residues modulo e = exponent(N) on a fixed generator list of N.
class CharacterSpace {
 public:
  /// Throws std::invalid_argument if N is not abelian or not normal.
  CharacterSpace(const PcGroup& g, const Subgroup& n);

  const std::vector<Element>& generators() const noexcept { return gens_; }
  std::uint64_t modulus() const noexcept { return modulus_; }

  /// Howell basis of all characters.
  const linalg::ModMatrix& characters() const noexcept { return characters_; }
  /// Howell basis of the characters fixed by every generator of G.
  const linalg::ModMatrix& fixed() const noexcept { return fixed_; }
  std::uint64_t character_count() const;
  std::uint64_t fixed_count() const;

  bool is_character(const std::vector<std::uint64_t>& values) const;
  bool is_fixed(const std::vector<std::uint64_t>& values) const;

  /// Value of chi at h in N (residue modulo modulus()).
  std::uint64_t evaluate(const std::vector<std::uint64_t>& chi, const Element& h) const;
  /// (^x chi)(h) = chi(x^{-1} h x).
  std::vector<std::uint64_t> act(const Element& x, const std::vector<std::uint64_t>& chi) const;

  /// Integer coordinates of h in terms of generators(); throws if h is not in N.
  const std::vector<long long>& coordinates(const Element& h) const;

 private:
  const PcGroup* g_;
  std::vector<Element> gens_;
  std::uint64_t modulus_ = 1;
  std::vector<std::uint64_t> index_;             // element indices of N, sorted
  std::vector<std::vector<long long>> coords_;   // parallel to index_
  linalg::ModMatrix relations_{0, 0, 2};
  linalg::ModMatrix characters_{0, 0, 2};
  linalg::ModMatrix fixed_{0, 0, 2};
};

}  // namespace b0kit::homology
