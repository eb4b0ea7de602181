#include "b0kit/families.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace b0kit::families {

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

void require_odd_prime(int p) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not an odd prime");
}

long long pow_mod(long long a, long long e, long long m) {
  long long r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = r * a % m;
    a = a * a % m;
    e >>= 1;
  }
  return r;
}

Exponents word(std::initializer_list<std::pair<int, int>> factors) {
  Exponents w(5, 0);
  for (auto [g, e] : factors) w[static_cast<std::size_t>(g - 1)] = e;
  return w;
}

/// Shared commutator structure on f1..f5 with all relative orders p.
PcPresentation skeleton(int p) {
  PcPresentation q(std::vector<int>(5, p));
  q.set_commutator(1, 0, word({{3, 1}}));  // [f2,f1] = f3
  q.set_commutator(2, 0, word({{4, 1}}));  // [f3,f1] = f4
  q.set_commutator(3, 0, word({{5, 1}}));  // [f4,f1] = f5
  q.set_commutator(2, 1, word({{5, 1}}));  // [f3,f2] = f5
  return q;
}

}  // namespace

int smallest_primitive_root(int p) {
  require_odd_prime(p);
  std::vector<int> factors;
  int m = p - 1;
  for (int d = 2; d * d <= m; ++d)
    if (m % d == 0) {
      factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  if (m > 1) factors.push_back(m);
  for (int a = 2; a < p; ++a)
    if (std::all_of(factors.begin(), factors.end(), [&](int q) { return pow_mod(a, (p - 1) / q, p) != 1; }))
      return a;
  return 2;  // p = 3 has only the candidate 2
}

int c2(int p) {
  require_odd_prime(p);
  return std::gcd(4, p - 1) - 1;
}

int c3(int p) {
  require_odd_prime(p);
  return std::gcd(3, p - 1) - 1;
}

int b0_family_count(int p) {
  require_odd_prime(p);
  return 1 + std::gcd(4, p - 1) + std::gcd(3, p - 1);
}

int bagnera_count(int p) {
  require_odd_prime(p);
  return 2 * p + 61 + std::gcd(4, p - 1) + 2 * std::gcd(3, p - 1);
}

std::string tag(Family f) {
  switch (f) {
    case Family::G243_28: return "G243_28";
    case Family::G243_29: return "G243_29";
    case Family::G243_30: return "G243_30";
    case Family::G1: return "G1";
    case Family::G2: return "G2";
    case Family::G3: return "G3";
    case Family::G28_IMPOSTOR: return "G28_IMPOSTOR";
    case Family::G29_IMPOSTOR: return "G29_IMPOSTOR";
    case Family::G30_IMPOSTOR: return "G30_IMPOSTOR";
  }
  return "?";
}

Family parse_tag(const std::string& t) {
  std::string u;
  for (char c : t) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto f : {Family::G243_28, Family::G243_29, Family::G243_30, Family::G1, Family::G2, Family::G3,
                 Family::G28_IMPOSTOR, Family::G29_IMPOSTOR, Family::G30_IMPOSTOR})
    if (tag(f) == u) return f;
  if (u == "G28") return Family::G28_IMPOSTOR;
  if (u == "G29") return Family::G29_IMPOSTOR;
  if (u == "G30") return Family::G30_IMPOSTOR;
  throw std::invalid_argument("unknown family tag '" + t + "'");
}

std::string name(const FamilySpec& s) {
  const auto p = std::to_string(s.p);
  const auto r = std::to_string(s.r);
  switch (s.family) {
    case Family::G243_28: return "G(243,28)";
    case Family::G243_29: return "G(243,29)";
    case Family::G243_30: return "G(243,30)";
    case Family::G1: return "G(1|" + p + ")";
    case Family::G2: return "G_" + r + "(2|" + p + ")";
    case Family::G3: return "G_" + r + "(3|" + p + ")";
    case Family::G28_IMPOSTOR: return "G(28|" + p + ")";
    case Family::G29_IMPOSTOR: return "G(29|" + p + ")";
    case Family::G30_IMPOSTOR: return "G(30|" + p + ")";
  }
  return "?";
}

void validate(const FamilySpec& s) {
  require_odd_prime(s.p);
  switch (s.family) {
    case Family::G243_28:
    case Family::G243_29:
    case Family::G243_30:
      if (s.p != 3) throw std::invalid_argument(tag(s.family) + " is defined only for p = 3");
      if (s.r != 0) throw std::invalid_argument(tag(s.family) + " takes no parameter r");
      break;
    case Family::G1:
    case Family::G28_IMPOSTOR:
    case Family::G29_IMPOSTOR:
    case Family::G30_IMPOSTOR:
      if (s.r != 0) throw std::invalid_argument(tag(s.family) + " takes no parameter r");
      break;
    case Family::G2:
      if (s.r < 0 || s.r > c2(s.p))
        throw std::invalid_argument("G2 needs 0 <= r <= c2(p) = " + std::to_string(c2(s.p)));
      break;
    case Family::G3:
      if (s.r < 0 || s.r > c3(s.p))
        throw std::invalid_argument("G3 needs 0 <= r <= c3(p) = " + std::to_string(c3(s.p)));
      break;
  }
}

PcPresentation build(const FamilySpec& s) {
  validate(s);
  const int p = s.p;
  const int m1 = p - 1;  // exponent of an inverse
  PcPresentation q = skeleton(p);
  switch (s.family) {
    case Family::G243_28:
    case Family::G28_IMPOSTOR:
      q.set_power(1, word({{4, m1}}));
      q.set_power(2, word({{5, m1}}));
      break;
    case Family::G243_29:
    case Family::G29_IMPOSTOR:
      q.set_power(0, word({{5, 1}}));
      q.set_power(1, word({{4, m1}}));
      q.set_power(2, word({{5, m1}}));
      break;
    case Family::G243_30:
    case Family::G30_IMPOSTOR:
      q.set_power(0, word({{5, m1}}));
      q.set_power(1, word({{4, m1}}));
      q.set_power(2, word({{5, m1}}));
      break;
    case Family::G1:
      break;
    case Family::G2:
      q.set_power(0, word({{5, static_cast<int>(pow_mod(smallest_primitive_root(p), s.r, p))}}));
      break;
    case Family::G3:
      q.set_power(1, word({{5, static_cast<int>(pow_mod(smallest_primitive_root(p), s.r, p))}}));
      break;
  }
  return q;
}

std::vector<FamilySpec> members(int p) {
  require_odd_prime(p);
  if (p == 3) return {{Family::G243_28, 3, 0}, {Family::G243_29, 3, 0}, {Family::G243_30, 3, 0}};
  std::vector<FamilySpec> out{{Family::G1, p, 0}};
  for (int r = 0; r <= c2(p); ++r) out.push_back({Family::G2, p, r});
  for (int r = 0; r <= c3(p); ++r) out.push_back({Family::G3, p, r});
  return out;
}

std::vector<FamilySpec> degenerate_p3() {
  return {{Family::G1, 3, 0}, {Family::G2, 3, 0}, {Family::G2, 3, 1}, {Family::G3, 3, 0}};
}

// ---- Controls ------------------------------------------------------------------

PcPresentation cyclic(int n) {
  if (n < 2) throw std::invalid_argument("cyclic group needs n >= 2");
  return PcPresentation({n});
}

PcPresentation elementary_abelian(int p, int k) { return PcPresentation(std::vector<int>(static_cast<std::size_t>(k), p)); }

PcPresentation heisenberg(int p) {
  PcPresentation q({p, p, p});
  q.set_commutator(1, 0, {0, 0, 1});
  return q;
}

PcPresentation modular(int p) {
  // g1 = b, g2 = a, g3 = a^p with a^b = a^{1+p}.
  PcPresentation q({p, p, p});
  q.set_power(1, {0, 0, 1});
  q.set_commutator(1, 0, {0, 0, 1});
  return q;
}

PcPresentation dihedral8() {
  PcPresentation q({2, 2, 2});
  q.set_power(1, {0, 0, 1});
  q.set_commutator(1, 0, {0, 0, 1});
  return q;
}

PcPresentation quaternion8() {
  PcPresentation q = dihedral8();
  q.set_power(0, {0, 0, 1});
  return q;
}

PcPresentation dihedral16() {
  // g2 = rotation of order 8, g3 = g2^2, g4 = g2^4, g1 inverts g2.
  PcPresentation q({2, 2, 2, 2});
  q.set_power(1, {0, 0, 1, 0});
  q.set_power(2, {0, 0, 0, 1});
  q.set_conjugate(1, 0, {0, 1, 1, 1});
  q.set_conjugate(2, 0, {0, 0, 1, 1});
  return q;
}

PcPresentation quaternion16() {
  PcPresentation q = dihedral16();
  q.set_power(0, {0, 0, 0, 1});
  return q;
}

std::vector<NamedGroup> controls() {
  std::vector<NamedGroup> out;
  for (int n : {2, 3, 4, 5, 7, 8, 9, 12, 25, 27}) out.push_back({"C" + std::to_string(n), cyclic(n)});
  out.push_back({"C2xC2", elementary_abelian(2, 2)});
  out.push_back({"C3xC3", elementary_abelian(3, 2)});
  out.push_back({"C5xC5", elementary_abelian(5, 2)});
  out.push_back({"C2xC2xC2", elementary_abelian(2, 3)});
  out.push_back({"C3xC3xC3", elementary_abelian(3, 3)});
  out.push_back({"C2^4", elementary_abelian(2, 4)});
  out.push_back({"C4xC2", direct_product(cyclic(4), cyclic(2))});
  out.push_back({"C4xC4", direct_product(cyclic(4), cyclic(4))});
  out.push_back({"C9xC3", direct_product(cyclic(9), cyclic(3))});
  out.push_back({"C2xC3", direct_product(cyclic(2), cyclic(3))});
  out.push_back({"Heisenberg(3)", heisenberg(3)});
  out.push_back({"Heisenberg(5)", heisenberg(5)});
  out.push_back({"Modular(3)", modular(3)});
  out.push_back({"Modular(5)", modular(5)});
  out.push_back({"D4", dihedral8()});
  out.push_back({"Q8", quaternion8()});
  out.push_back({"D8", dihedral16()});
  out.push_back({"Q16", quaternion16()});
  out.push_back({"D4xC2", direct_product(dihedral8(), cyclic(2))});
  out.push_back({"Q8xC2", direct_product(quaternion8(), cyclic(2))});
  out.push_back({"D4xC2xC2", direct_product(dihedral8(), elementary_abelian(2, 2))});
  out.push_back({"Q8xC4", direct_product(quaternion8(), cyclic(4))});
  out.push_back({"Heisenberg(3)xC2", direct_product(heisenberg(3), cyclic(2))});
  out.push_back({"Heisenberg(3)xC3", direct_product(heisenberg(3), cyclic(3))});
  return out;
}

std::vector<NamedGroup> order_p4_controls(int p) {
  std::vector<NamedGroup> out;
  for (const auto& s : members(p)) out.push_back({name(s) + "/<f5>", quotient_by_tail(build(s), 4)});
  if (p >= 5)
    for (auto f : {Family::G28_IMPOSTOR, Family::G29_IMPOSTOR, Family::G30_IMPOSTOR}) {
      FamilySpec s{f, p, 0};
      out.push_back({name(s) + " collapsed", enforced_quotient(build(s)).presentation});
    }
  return out;
}

}  // namespace b0kit::families
