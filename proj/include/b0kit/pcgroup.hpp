#pragma once

// Finite groups given by power-commutator (pc) presentations.
//
// Generators g_0 .. g_{n-1} (written f1 .. fn in reports and files) with
// relative orders o_i, power relations g_i^{o_i} = w_i in generators > i and
// conjugate relations g_j^{g_i} = g_i^{-1} g_j g_i = w_ij in generators >= j
// (i < j). Every element has a unique collected form g_0^{e_0} ... with
// 0 <= e_i < o_i. Commutators follow [g,h] = g^{-1} h^{-1} g h.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "b0kit/linalg.hpp"

namespace b0kit {

/// Dense exponent vector of a collected word.
using Exponents = std::vector<int>;

struct Syllable {
  int generator;
  long long exponent;
};

/// Arbitrary (uncollected) word; exponents may be negative.
using Word = std::vector<Syllable>;

/// Group element in collected form.
struct Element {
  Exponents exponents;

  auto operator<=>(const Element&) const = default;
};

class PresentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CollectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PcPresentation {
 public:
  /// All power and conjugate relations start out trivial.
  explicit PcPresentation(std::vector<int> relative_orders);

  int rank() const noexcept { return static_cast<int>(orders_.size()); }
  int relative_order(int i) const { return orders_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& relative_orders() const noexcept { return orders_; }

  const Exponents& power(int i) const { return powers_.at(static_cast<std::size_t>(i)); }
  /// g_j^{g_i} for i < j.
  const Exponents& conjugate(int j, int i) const;
  bool conjugate_is_trivial(int j, int i) const;

  /// w must be collected and involve only generators > i.
  void set_power(int i, Exponents w);
  /// w must be collected and involve only generators >= j.
  void set_conjugate(int j, int i, Exponents w);
  /// Sets [g_j, g_i] = c for c collected in generators > j, i.e.
  /// g_j^{g_i} = g_j * c.
  void set_commutator(int j, int i, const Exponents& c);

  /// Product of the relative orders; throws on overflow past 2^63.
  std::uint64_t nominal_order() const;
  Exponents zero_word() const { return Exponents(orders_.size(), 0); }
  bool is_collected(const Exponents& w) const;

  friend bool operator==(const PcPresentation&, const PcPresentation&) = default;

 private:
  std::size_t conj_index(int j, int i) const;
  void check_word(const Exponents& w, int min_generator, const char* what) const;

  std::vector<int> orders_;
  std::vector<Exponents> powers_;
  std::vector<Exponents> conjugates_;  // n x n, entry (j, i) used for i < j
};

/// Text format:
///
///   pcgroup <n>
///   order <i> <o_i>                 (one line per generator, 1-based)
///   power <i> = <word>
///   conj <j> ^ <i> = <word>         (i < j; means g_j^{g_i})
///
/// A word is `1` or factors `g<k>^<e>` (or `g<k>`) joined by `*` with
/// strictly increasing k and 0 < e < o_k. A negative exponent is accepted
/// only for a generator whose power relation is trivial and is rewritten as
/// o_k + e. Unlisted relations are trivial; `#` starts a comment.
PcPresentation parse_presentation(std::string_view text);
PcPresentation read_presentation_file(const std::string& path);
std::string to_text(const PcPresentation& p);
std::string word_to_string(const Exponents& w, const char* letter = "g");

/// Stable text fingerprint (FNV-1a over the canonical serialization).
std::string fingerprint(const PcPresentation& p);

/// Central "tail" generators attached to the relations of a presentation.
/// Tails are free abelian and central; every power/conjugate relation gets
/// its own tail index.
struct TailLayout {
  int count = 0;
  std::vector<int> power_tail;        // per generator
  std::vector<int> conjugate_tail;    // n x n, (j, i) for i < j

  static TailLayout for_presentation(int rank);
};

/// Collected word together with an integer tail vector. For plain
/// presentations the tail vector is empty.
struct CollectedWord {
  Exponents exponents;
  std::vector<std::int64_t> tails;

  friend bool operator==(const CollectedWord&, const CollectedWord&) = default;
};

/// Collection from the left. Optionally tracks tails (for cover groups).
/// Stateless after construction, so concurrent use is safe.
class Collector {
 public:
  static constexpr std::uint64_t kDefaultStepBudget = 100'000'000;

  explicit Collector(const PcPresentation& p, const TailLayout* tails = nullptr,
                     std::uint64_t step_budget = kDefaultStepBudget);

  const PcPresentation& presentation() const noexcept { return *p_; }
  int tail_count() const noexcept { return tails_ ? tails_->count : 0; }

  CollectedWord identity() const;
  CollectedWord generator(int i) const;
  CollectedWord lift(const Exponents& e) const;

  /// state <- state * g_k^count, count >= 0.
  void multiply_generator(CollectedWord& state, int k, long long count = 1) const;
  /// state <- state * w (w collected, tails added verbatim).
  void multiply(CollectedWord& state, const CollectedWord& w) const;
  CollectedWord product(const CollectedWord& a, const CollectedWord& b) const;
  /// Solves a * x = identity, tails included.
  CollectedWord inverse(const CollectedWord& a) const;
  /// Collects an arbitrary word; negative exponents use inverses.
  CollectedWord collect(const Word& w) const;

 private:
  struct Pending {
    int generator;
    int count;
  };
  using Sparse = std::vector<Pending>;

  void run(CollectedWord& state, std::vector<Pending>& stack) const;
  static void push_reversed(std::vector<Pending>& stack, const Sparse& w, int reps);
  void add_tail(CollectedWord& state, int tail, long long times) const;

  const PcPresentation* p_;
  const TailLayout* tails_;
  std::uint64_t budget_;
  int n_ = 0;
  std::vector<Sparse> powers_;
  std::vector<Sparse> conjugates_;         // n x n, (j, i) at j * n + i
  std::vector<char> conjugate_trivial_;    // n x n
};

/// Consistent pc presentation with element arithmetic by collection. This
/// is the serial reference path; bulk work goes through GroupTables.
class PcGroup {
 public:
  explicit PcGroup(PcPresentation p);

  PcGroup(const PcGroup& other);
  PcGroup& operator=(const PcGroup& other);

  const PcPresentation& presentation() const noexcept { return p_; }
  int rank() const noexcept { return p_.rank(); }
  std::uint64_t order() const { return p_.nominal_order(); }

  Element identity() const;
  Element generator(int i) const;
  Element from_exponents(Exponents e) const;

  Element collect(const Word& w) const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element power(const Element& a, long long k) const;
  /// a^{-1} b^{-1} a b
  Element commutator(const Element& a, const Element& b) const;
  /// b^{-1} a b
  Element conjugate(const Element& a, const Element& b) const;

  std::uint64_t element_order(const Element& a) const;
  bool is_identity(const Element& a) const;

  /// Mixed-radix index, generator 0 most significant.
  std::uint64_t index_of(const Element& a) const;
  Element element_at(std::uint64_t index) const;

 private:
  PcPresentation p_;
  Collector collector_;
};

std::uint64_t index_of(const std::vector<int>& orders, const Exponents& e);
void exponents_at(const std::vector<int>& orders, std::uint64_t index, Exponents& out);

/// Explicit subgroup of an enumerable group.
struct Subgroup {
  std::vector<Element> generators;
  std::vector<std::uint64_t> elements;  // sorted element indices
  bool is_normal = false;

  std::size_t order() const noexcept { return elements.size(); }
  bool contains(std::uint64_t index) const;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 20'000'000;

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closure of `gens` under multiplication.
Subgroup generate_subgroup(const PcGroup& g, const std::vector<Element>& gens,
                           std::uint64_t budget = kDefaultEnumerationBudget);

/// Subgroup <g_k, ..., g_{n-1}> of a terminal segment.
Subgroup terminal_segment(const PcGroup& g, int k);

// ---- Consistency ---------------------------------------------------------

enum class OverlapKind { Triple, PowerLeft, PowerRight, PowerSelf };

/// One associativity test word. For Triple: g_k g_j g_i with k > j > i.
/// PowerLeft: g_j^{o_j} g_i (j > i); PowerRight: g_j g_i^{o_i} (j > i);
/// PowerSelf: g_i^{o_i+1}.
struct Overlap {
  OverlapKind kind;
  int k = -1;
  int j = -1;
  int i = -1;

  std::string to_string() const;
};

std::vector<Overlap> overlaps(int rank);

/// Collects the overlap word by the two bracketings.
std::pair<CollectedWord, CollectedWord> evaluate_overlap(const Collector& c, const Overlap& o);

struct OverlapFailure {
  Overlap overlap;
  Exponents left;
  Exponents right;
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<OverlapFailure> failures;
};

ConsistencyReport check_consistency(const PcPresentation& p);
inline bool is_consistent(const PcPresentation& p) { return check_consistency(p).consistent; }

class NonCentralFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnforcedQuotient {
  PcPresentation presentation;
  std::uint64_t order;
  int rounds = 0;
};

/// The consistent presentation of the group an inconsistent presentation
/// actually defines, for failures confined to a central terminal segment.
EnforcedQuotient enforced_quotient(const PcPresentation& p, int max_rounds = 64);

// ---- Structure -----------------------------------------------------------

Subgroup center(const PcGroup& g, std::uint64_t budget = kDefaultEnumerationBudget);
/// Normal closure of the generator commutators.
Subgroup derived_subgroup(const PcGroup& g, std::uint64_t budget = kDefaultEnumerationBudget);
/// Invariants of G/[G,G] from the exponent-sum relation matrix.
AbelianInvariants abelianization(const PcPresentation& p);
std::uint64_t exponent(const PcGroup& g, std::uint64_t budget = kDefaultEnumerationBudget);

/// Calls f(element) for every element in index order.
template <class F>
void enumerate_elements(const PcGroup& g, F&& f, std::uint64_t budget = kDefaultEnumerationBudget) {
  const auto n = g.order();
  if (n > budget)
    throw BudgetError("group of order " + std::to_string(n) + " too large to enumerate");
  Element e{g.presentation().zero_word()};
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    exponents_at(g.presentation().relative_orders(), idx, e.exponents);
    f(e);
  }
}

/// G / <g_k, ..., g_{n-1}>.
PcPresentation quotient_by_tail(const PcPresentation& p, int k);

PcPresentation direct_product(const PcPresentation& a, const PcPresentation& b);

}  // namespace b0kit
