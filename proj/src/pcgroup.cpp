#include "b0kit/pcgroup.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace b0kit {

namespace {

bool is_unit_word(const Exponents& w, int j) {
  for (std::size_t l = 0; l < w.size(); ++l)
    if (w[l] != (static_cast<int>(l) == j ? 1 : 0)) return false;
  return true;
}

Exponents unit_word(int n, int j) {
  Exponents w(static_cast<std::size_t>(n), 0);
  w[static_cast<std::size_t>(j)] = 1;
  return w;
}

}  // namespace

// ---- PcPresentation --------------------------------------------------------

PcPresentation::PcPresentation(std::vector<int> relative_orders)
    : orders_(std::move(relative_orders)) {
  const int n = rank();
  for (int o : orders_)
    if (o < 2) throw PresentationError("relative orders must be at least 2");
  powers_.assign(orders_.size(), Exponents(orders_.size(), 0));
  conjugates_.resize(orders_.size() * orders_.size());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) conjugates_[conj_index(j, i)] = unit_word(n, j);
}

std::size_t PcPresentation::conj_index(int j, int i) const {
  const int n = rank();
  if (i < 0 || j >= n || i >= j)
    throw std::out_of_range("conjugate relation needs 0 <= i < j < n");
  return static_cast<std::size_t>(j) * orders_.size() + static_cast<std::size_t>(i);
}

const Exponents& PcPresentation::conjugate(int j, int i) const { return conjugates_[conj_index(j, i)]; }

bool PcPresentation::conjugate_is_trivial(int j, int i) const { return is_unit_word(conjugate(j, i), j); }

bool PcPresentation::is_collected(const Exponents& w) const {
  if (w.size() != orders_.size()) return false;
  for (std::size_t l = 0; l < w.size(); ++l)
    if (w[l] < 0 || w[l] >= orders_[l]) return false;
  return true;
}

void PcPresentation::check_word(const Exponents& w, int min_generator, const char* what) const {
  if (!is_collected(w)) throw PresentationError(std::string(what) + " word is not in normal form");
  for (int l = 0; l < min_generator && l < rank(); ++l)
    if (w[static_cast<std::size_t>(l)] != 0)
      throw PresentationError(std::string(what) + " word uses generator g" + std::to_string(l + 1) +
                              " below the allowed range");
}

void PcPresentation::set_power(int i, Exponents w) {
  if (i < 0 || i >= rank()) throw std::out_of_range("power relation index");
  check_word(w, i + 1, "power");
  powers_[static_cast<std::size_t>(i)] = std::move(w);
}

void PcPresentation::set_conjugate(int j, int i, Exponents w) {
  const auto idx = conj_index(j, i);
  check_word(w, j, "conjugate");
  conjugates_[idx] = std::move(w);
}

void PcPresentation::set_commutator(int j, int i, const Exponents& c) {
  check_word(c, j + 1, "commutator");
  Exponents w = c;
  // g_j * c is collected since c only involves generators above j.
  w[static_cast<std::size_t>(j)] = 1;
  set_conjugate(j, i, std::move(w));
}

std::uint64_t PcPresentation::nominal_order() const {
  std::uint64_t n = 1;
  for (int o : orders_) {
    if (n > (std::uint64_t{1} << 63) / static_cast<std::uint64_t>(o))
      throw std::overflow_error("group order exceeds 2^63");
    n *= static_cast<std::uint64_t>(o);
  }
  return n;
}

// ---- Text format -----------------------------------------------------------

std::string word_to_string(const Exponents& w, const char* letter) {
  std::string out;
  for (std::size_t l = 0; l < w.size(); ++l) {
    if (w[l] == 0) continue;
    if (!out.empty()) out += '*';
    out += letter + std::to_string(l + 1);
    if (w[l] != 1) out += '^' + std::to_string(w[l]);
  }
  return out.empty() ? "1" : out;
}

std::string to_text(const PcPresentation& p) {
  std::ostringstream os;
  const int n = p.rank();
  os << "pcgroup " << n << '\n';
  for (int i = 0; i < n; ++i) os << "order " << i + 1 << ' ' << p.relative_order(i) << '\n';
  for (int i = 0; i < n; ++i)
    if (std::any_of(p.power(i).begin(), p.power(i).end(), [](int e) { return e != 0; }))
      os << "power " << i + 1 << " = " << word_to_string(p.power(i)) << '\n';
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!p.conjugate_is_trivial(j, i))
        os << "conj " << j + 1 << " ^ " << i + 1 << " = " << word_to_string(p.conjugate(j, i)) << '\n';
  return os.str();
}

namespace {

struct LineParser {
  std::string_view rest;
  int line_no;

  [[noreturn]] void fail(const std::string& msg) const {
    throw PresentationError("line " + std::to_string(line_no) + ": " + msg);
  }

  void skip_ws() {
    while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t' || rest.front() == '\r'))
      rest.remove_prefix(1);
  }

  std::string_view token() {
    skip_ws();
    std::size_t k = 0;
    while (k < rest.size() && rest[k] != ' ' && rest[k] != '\t' && rest[k] != '\r') ++k;
    auto t = rest.substr(0, k);
    rest.remove_prefix(k);
    return t;
  }

  long long integer(std::string_view t) const {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail("expected an integer, got '" + std::string(t) + "'");
    return v;
  }

  void expect(std::string_view t) {
    auto got = token();
    if (got != t) fail("expected '" + std::string(t) + "'");
  }

  bool at_end() {
    skip_ws();
    return rest.empty();
  }
};

Exponents parse_word(LineParser& lp, const std::vector<int>& orders, const std::vector<bool>& trivial_power) {
  lp.skip_ws();
  std::string text;
  while (!lp.at_end()) text += std::string(lp.token());
  const int n = static_cast<int>(orders.size());
  Exponents w(orders.size(), 0);
  if (text == "1") return w;
  if (text.empty()) lp.fail("missing word");
  int last = -1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto star = text.find('*', pos);
    if (star == std::string::npos) star = text.size();
    std::string_view f(text.data() + pos, star - pos);
    if (f.size() < 2 || f[0] != 'g') lp.fail("bad factor '" + std::string(f) + "'");
    auto caret = f.find('^');
    long long k = lp.integer(f.substr(1, caret == std::string_view::npos ? f.npos : caret - 1));
    long long e = caret == std::string_view::npos ? 1 : lp.integer(f.substr(caret + 1));
    if (k < 1 || k > n) lp.fail("generator g" + std::to_string(k) + " out of range");
    const int g = static_cast<int>(k - 1);
    if (g <= last) lp.fail("generators must appear in increasing order");
    last = g;
    const int o = orders[static_cast<std::size_t>(g)];
    if (e < 0) {
      if (!trivial_power[static_cast<std::size_t>(g)] || e <= -o)
        lp.fail("negative exponent on g" + std::to_string(k) + " is not normalizable");
      e += o;
    }
    if (e >= o) lp.fail("exponent of g" + std::to_string(k) + " not below its relative order");
    w[static_cast<std::size_t>(g)] = static_cast<int>(e);
    pos = star + 1;
  }
  return w;
}

}  // namespace

PcPresentation parse_presentation(std::string_view text) {
  struct Pending {
    int line;
    std::string content;
  };
  std::vector<Pending> lines;
  {
    int no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      ++no;
      std::string l(text.substr(pos, nl - pos));
      if (auto hash = l.find('#'); hash != std::string::npos) l.resize(hash);
      if (l.find_first_not_of(" \t\r") != std::string::npos) lines.push_back({no, l});
      pos = nl + 1;
    }
  }
  if (lines.empty()) throw PresentationError("empty presentation");

  LineParser head{lines[0].content, lines[0].line};
  head.expect("pcgroup");
  const long long n = head.integer(head.token());
  if (n < 0 || n > 64) head.fail("generator count out of range");
  if (!head.at_end()) head.fail("trailing text");

  std::vector<int> orders(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<LineParser, std::string>> relations;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    LineParser lp{lines[k].content, lines[k].line};
    auto kw = std::string(lp.token());
    if (kw == "order") {
      long long i = lp.integer(lp.token());
      long long o = lp.integer(lp.token());
      if (i < 1 || i > n) lp.fail("generator index out of range");
      if (o < 2 || o > (1 << 30)) lp.fail("relative order out of range");
      if (orders[static_cast<std::size_t>(i - 1)] != 0) lp.fail("duplicate order line");
      if (!lp.at_end()) lp.fail("trailing text");
      orders[static_cast<std::size_t>(i - 1)] = static_cast<int>(o);
    } else if (kw == "power" || kw == "conj") {
      relations.emplace_back(lp, kw);
    } else {
      lp.fail("unknown keyword '" + kw + "'");
    }
  }
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] == 0) throw PresentationError("missing order line for g" + std::to_string(i + 1));

  // Powers first: negative exponents depend on which power words are trivial.
  std::vector<bool> trivial_power(orders.size(), true);
  for (auto& [lp, kw] : relations) {
    if (kw != "power") continue;
    LineParser probe = lp;
    long long i = probe.integer(probe.token());
    if (i < 1 || i > n) probe.fail("generator index out of range");
    probe.expect("=");
    if (!(probe.token() == "1" && probe.at_end())) trivial_power[static_cast<std::size_t>(i - 1)] = false;
  }

  PcPresentation p(orders);
  std::vector<char> seen_power(orders.size(), 0);
  std::vector<char> seen_conj(orders.size() * orders.size(), 0);
  for (auto& [lp, kw] : relations) {
    try {
      if (kw == "power") {
        long long i = lp.integer(lp.token());
        lp.expect("=");
        auto w = parse_word(lp, orders, trivial_power);
        if (seen_power[static_cast<std::size_t>(i - 1)]++) lp.fail("duplicate power relation");
        p.set_power(static_cast<int>(i - 1), std::move(w));
      } else {
        long long j = lp.integer(lp.token());
        lp.expect("^");
        long long i = lp.integer(lp.token());
        lp.expect("=");
        if (i < 1 || j > n || i >= j) lp.fail("conj needs 1 <= i < j <= n");
        auto w = parse_word(lp, orders, trivial_power);
        auto idx = static_cast<std::size_t>((j - 1) * n + (i - 1));
        if (seen_conj[idx]++) lp.fail("duplicate conjugate relation");
        p.set_conjugate(static_cast<int>(j - 1), static_cast<int>(i - 1), std::move(w));
      }
    } catch (const PresentationError& e) {
      std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      lp.fail(msg);
    }
  }
  return p;
}

PcPresentation read_presentation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PresentationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str());
}

std::string fingerprint(const PcPresentation& p) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : to_text(p)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- Tails -----------------------------------------------------------------

TailLayout TailLayout::for_presentation(int rank) {
  TailLayout t;
  const auto n = static_cast<std::size_t>(rank);
  t.power_tail.resize(n);
  t.conjugate_tail.assign(n * n, -1);
  int next = 0;
  for (int i = 0; i < rank; ++i) t.power_tail[static_cast<std::size_t>(i)] = next++;
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j)
      t.conjugate_tail[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i)] = next++;
  t.count = next;
  return t;
}

// ---- Collector -------------------------------------------------------------

Collector::Collector(const PcPresentation& p, const TailLayout* tails, std::uint64_t step_budget)
    : p_(&p), tails_(tails), budget_(step_budget), n_(p.rank()) {
  const auto n = static_cast<std::size_t>(n_);
  auto sparse = [](const Exponents& w) {
    Sparse s;
    for (std::size_t l = 0; l < w.size(); ++l)
      if (w[l] != 0) s.push_back({static_cast<int>(l), w[l]});
    return s;
  };
  powers_.resize(n);
  conjugates_.resize(n * n);
  conjugate_trivial_.assign(n * n, 1);
  for (int i = 0; i < n_; ++i) {
    powers_[static_cast<std::size_t>(i)] = sparse(p.power(i));
    for (int j = i + 1; j < n_; ++j) {
      const auto idx = static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i);
      conjugates_[idx] = sparse(p.conjugate(j, i));
      conjugate_trivial_[idx] = p.conjugate_is_trivial(j, i) ? 1 : 0;
    }
  }
}

CollectedWord Collector::identity() const {
  return {p_->zero_word(), std::vector<std::int64_t>(static_cast<std::size_t>(tail_count()), 0)};
}

CollectedWord Collector::generator(int i) const {
  auto w = identity();
  w.exponents.at(static_cast<std::size_t>(i)) = 1;
  return w;
}

CollectedWord Collector::lift(const Exponents& e) const {
  auto w = identity();
  if (e.size() != w.exponents.size()) throw std::invalid_argument("exponent vector length mismatch");
  w.exponents = e;
  return w;
}

void Collector::add_tail(CollectedWord& state, int tail, long long times) const {
  if (tails_ == nullptr || times == 0) return;
  state.tails[static_cast<std::size_t>(tail)] += times;
}

void Collector::push_reversed(std::vector<Pending>& stack, const Sparse& w, int reps) {
  for (int r = 0; r < reps; ++r)
    for (auto it = w.rbegin(); it != w.rend(); ++it) stack.push_back(*it);
}

void Collector::run(CollectedWord& state, std::vector<Pending>& stack) const {
  const auto n = static_cast<std::size_t>(n_);
  const auto& orders = p_->relative_orders();
  auto& e = state.exponents;
  std::uint64_t steps = 0;
  while (!stack.empty()) {
    if (++steps > budget_) throw CollectionError("presentation not nilpotent-shaped: collection step budget exhausted");
    const Pending top = stack.back();
    stack.pop_back();
    const int k = top.generator;
    const auto ku = static_cast<std::size_t>(k);
    if (top.count == 0) continue;

    bool commutes = true;
    for (std::size_t l = ku + 1; l < n && commutes; ++l)
      if (e[l] != 0 && !conjugate_trivial_[l * n + ku]) commutes = false;

    if (commutes) {
      if (tails_ != nullptr)
        for (std::size_t l = ku + 1; l < n; ++l)
          if (e[l] != 0)
            add_tail(state, tails_->conjugate_tail[l * n + ku], static_cast<long long>(top.count) * e[l]);
      long long v = static_cast<long long>(e[ku]) + top.count;
      if (v < orders[ku]) {
        e[ku] = static_cast<int>(v);
        continue;
      }
      const long long q = v / orders[ku];
      e[ku] = static_cast<int>(v % orders[ku]);
      if (tails_ != nullptr) add_tail(state, tails_->power_tail[ku], q);
      // state = prefix * g_k^r * w_k^q * suffix
      for (std::size_t l = n; l-- > ku + 1;) {
        if (e[l] != 0) stack.push_back({static_cast<int>(l), e[l]});
        e[l] = 0;
      }
      push_reversed(stack, powers_[ku], static_cast<int>(q));
      continue;
    }

    // One g_k at a time: prefix * g_k * suffix^{g_k}.
    if (top.count > 1) stack.push_back({k, top.count - 1});
    for (std::size_t l = n; l-- > ku + 1;) {
      const int el = e[l];
      if (el == 0) continue;
      e[l] = 0;
      if (tails_ != nullptr) add_tail(state, tails_->conjugate_tail[l * n + ku], el);
      if (conjugate_trivial_[l * n + ku])
        stack.push_back({static_cast<int>(l), el});
      else
        push_reversed(stack, conjugates_[l * n + ku], el);
    }
    if (++e[ku] == orders[ku]) {
      e[ku] = 0;
      if (tails_ != nullptr) add_tail(state, tails_->power_tail[ku], 1);
      push_reversed(stack, powers_[ku], 1);
    }
  }
}

void Collector::multiply_generator(CollectedWord& state, int k, long long count) const {
  if (count < 0) throw std::invalid_argument("multiply_generator needs a non-negative count");
  std::vector<Pending> stack;
  stack.reserve(64);
  while (count > 0) {
    const int chunk = static_cast<int>(std::min<long long>(count, 1 << 30));
    stack.push_back({k, chunk});
    run(state, stack);
    count -= chunk;
  }
}

void Collector::multiply(CollectedWord& state, const CollectedWord& w) const {
  std::vector<Pending> stack;
  stack.reserve(64);
  for (std::size_t l = w.exponents.size(); l-- > 0;)
    if (w.exponents[l] != 0) stack.push_back({static_cast<int>(l), w.exponents[l]});
  run(state, stack);
  if (tails_ != nullptr)
    for (std::size_t t = 0; t < w.tails.size(); ++t) state.tails[t] += w.tails[t];
}

CollectedWord Collector::product(const CollectedWord& a, const CollectedWord& b) const {
  CollectedWord r = a;
  multiply(r, b);
  return r;
}

CollectedWord Collector::inverse(const CollectedWord& a) const {
  CollectedWord cur = a;
  CollectedWord x = identity();
  const auto& orders = p_->relative_orders();
  for (int k = 0; k < n_; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (cur.exponents[ku] == 0) continue;
    const int c = orders[ku] - cur.exponents[ku];
    multiply_generator(cur, k, c);
    x.exponents[ku] = c;
  }
  for (std::size_t t = 0; t < x.tails.size(); ++t) x.tails[t] = -cur.tails[t];
  return x;
}

namespace {

CollectedWord power_by_squaring(const Collector& c, CollectedWord base, unsigned long long k) {
  CollectedWord r = c.identity();
  while (k > 0) {
    if (k & 1ULL) c.multiply(r, base);
    k >>= 1;
    if (k > 0) base = c.product(base, base);
  }
  return r;
}

}  // namespace

CollectedWord Collector::collect(const Word& w) const {
  CollectedWord state = identity();
  for (const auto& s : w) {
    if (s.generator < 0 || s.generator >= n_) throw std::out_of_range("generator index in word");
    if (s.exponent >= 0 && s.exponent <= 4096) {
      multiply_generator(state, s.generator, s.exponent);
      continue;
    }
    CollectedWord base = generator(s.generator);
    if (s.exponent < 0) base = inverse(base);
    const unsigned long long k =
        s.exponent < 0 ? 0ULL - static_cast<unsigned long long>(s.exponent) : static_cast<unsigned long long>(s.exponent);
    multiply(state, power_by_squaring(*this, base, k));
  }
  return state;
}

// ---- PcGroup ---------------------------------------------------------------

PcGroup::PcGroup(PcPresentation p) : p_(std::move(p)), collector_(p_) {}

PcGroup::PcGroup(const PcGroup& other) : p_(other.p_), collector_(p_) {}

PcGroup& PcGroup::operator=(const PcGroup& other) {
  if (this != &other) {
    p_ = other.p_;
    collector_ = Collector(p_);
  }
  return *this;
}

Element PcGroup::identity() const { return {p_.zero_word()}; }

Element PcGroup::generator(int i) const {
  Element e = identity();
  e.exponents.at(static_cast<std::size_t>(i)) = 1;
  return e;
}

Element PcGroup::from_exponents(Exponents e) const {
  if (!p_.is_collected(e)) throw std::invalid_argument("exponent vector not in normal form");
  return {std::move(e)};
}

Element PcGroup::collect(const Word& w) const { return {collector_.collect(w).exponents}; }

Element PcGroup::multiply(const Element& a, const Element& b) const {
  CollectedWord s{a.exponents, {}};
  collector_.multiply(s, CollectedWord{b.exponents, {}});
  return {std::move(s.exponents)};
}

Element PcGroup::inverse(const Element& a) const {
  return {collector_.inverse(CollectedWord{a.exponents, {}}).exponents};
}

Element PcGroup::power(const Element& a, long long k) const {
  CollectedWord base{a.exponents, {}};
  if (k < 0) base = collector_.inverse(base);
  const unsigned long long m = k < 0 ? 0ULL - static_cast<unsigned long long>(k) : static_cast<unsigned long long>(k);
  return {power_by_squaring(collector_, base, m).exponents};
}

Element PcGroup::commutator(const Element& a, const Element& b) const {
  // [a,b] = (b a)^{-1} (a b)
  return multiply(inverse(multiply(b, a)), multiply(a, b));
}

Element PcGroup::conjugate(const Element& a, const Element& b) const {
  return multiply(inverse(b), multiply(a, b));
}

bool PcGroup::is_identity(const Element& a) const {
  return std::all_of(a.exponents.begin(), a.exponents.end(), [](int e) { return e == 0; });
}

std::uint64_t PcGroup::element_order(const Element& a) const {
  std::uint64_t k = 1;
  Element x = a;
  const auto bound = order();
  while (!is_identity(x)) {
    x = multiply(x, a);
    if (++k > bound) throw CollectionError("element order exceeds group order");
  }
  return k;
}

std::uint64_t index_of(const std::vector<int>& orders, const Exponents& e) {
  std::uint64_t idx = 0;
  for (std::size_t l = 0; l < orders.size(); ++l) idx = idx * static_cast<std::uint64_t>(orders[l]) + static_cast<std::uint64_t>(e[l]);
  return idx;
}

void exponents_at(const std::vector<int>& orders, std::uint64_t index, Exponents& out) {
  out.resize(orders.size());
  for (std::size_t l = orders.size(); l-- > 0;) {
    const auto o = static_cast<std::uint64_t>(orders[l]);
    out[l] = static_cast<int>(index % o);
    index /= o;
  }
}

std::uint64_t PcGroup::index_of(const Element& a) const { return b0kit::index_of(p_.relative_orders(), a.exponents); }

Element PcGroup::element_at(std::uint64_t index) const {
  Element e;
  exponents_at(p_.relative_orders(), index, e.exponents);
  return e;
}

// ---- Subgroups ---------------------------------------------------------------

bool Subgroup::contains(std::uint64_t index) const {
  return std::binary_search(elements.begin(), elements.end(), index);
}

namespace {

void mark_normality(const PcGroup& g, Subgroup& h) {
  h.is_normal = true;
  for (const auto& x : h.generators)
    for (int k = 0; k < g.rank() && h.is_normal; ++k)
      if (!h.contains(g.index_of(g.conjugate(x, g.generator(k))))) h.is_normal = false;
}

}  // namespace

Subgroup generate_subgroup(const PcGroup& g, const std::vector<Element>& gens, std::uint64_t budget) {
  Subgroup h;
  h.generators = gens;
  std::unordered_set<std::uint64_t> seen;
  std::vector<Element> frontier{g.identity()};
  seen.insert(g.index_of(g.identity()));
  std::vector<std::uint64_t> all{g.index_of(g.identity())};
  while (!frontier.empty()) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& s : gens) {
        Element y = g.multiply(x, s);
        auto idx = g.index_of(y);
        if (seen.insert(idx).second) {
          if (seen.size() > budget) throw BudgetError("subgroup too large to enumerate");
          all.push_back(idx);
          next.push_back(std::move(y));
        }
      }
    frontier = std::move(next);
  }
  std::sort(all.begin(), all.end());
  h.elements = std::move(all);
  mark_normality(g, h);
  return h;
}

Subgroup terminal_segment(const PcGroup& g, int k) {
  const int n = g.rank();
  if (k < 0 || k > n) throw std::out_of_range("terminal segment index");
  Subgroup h;
  for (int l = k; l < n; ++l) h.generators.push_back(g.generator(l));
  // Elements with zero exponents below k: a contiguous block of indices.
  std::uint64_t size = 1;
  for (int l = k; l < n; ++l) size *= static_cast<std::uint64_t>(g.presentation().relative_order(l));
  h.elements.resize(size);
  std::iota(h.elements.begin(), h.elements.end(), std::uint64_t{0});
  mark_normality(g, h);
  return h;
}

// ---- Consistency -------------------------------------------------------------

std::string Overlap::to_string() const {
  auto g = [](int x) { return "f" + std::to_string(x + 1); };
  switch (kind) {
    case OverlapKind::Triple: return g(k) + " " + g(j) + " " + g(i);
    case OverlapKind::PowerLeft: return g(j) + "^o " + g(i);
    case OverlapKind::PowerRight: return g(j) + " " + g(i) + "^o";
    case OverlapKind::PowerSelf: return g(i) + "^(o+1)";
  }
  return {};
}

std::vector<Overlap> overlaps(int rank) {
  std::vector<Overlap> out;
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j)
      for (int k = j + 1; k < rank; ++k) out.push_back({OverlapKind::Triple, k, j, i});
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) {
      out.push_back({OverlapKind::PowerLeft, -1, j, i});
      out.push_back({OverlapKind::PowerRight, -1, j, i});
    }
  for (int i = 0; i < rank; ++i) out.push_back({OverlapKind::PowerSelf, -1, -1, i});
  return out;
}

std::pair<CollectedWord, CollectedWord> evaluate_overlap(const Collector& c, const Overlap& o) {
  // Tails of the relation words are only visible through the collector, so
  // build g^o by collection (it applies the power relation and its tail).
  auto gen_power = [&](int i, long long e) {
    auto w = c.identity();
    c.multiply_generator(w, i, e);
    return w;
  };
  switch (o.kind) {
    case OverlapKind::Triple: {
      auto left = c.generator(o.k);
      c.multiply_generator(left, o.j);
      c.multiply_generator(left, o.i);
      auto ji = c.generator(o.j);
      c.multiply_generator(ji, o.i);
      auto right = c.generator(o.k);
      c.multiply(right, ji);
      return {left, right};
    }
    case OverlapKind::PowerLeft: {
      const int oj = c.presentation().relative_order(o.j);
      auto left = gen_power(o.j, oj);
      c.multiply_generator(left, o.i);
      auto ji = c.generator(o.j);
      c.multiply_generator(ji, o.i);
      auto right = gen_power(o.j, oj - 1);
      c.multiply(right, ji);
      return {left, right};
    }
    case OverlapKind::PowerRight: {
      const int oi = c.presentation().relative_order(o.i);
      auto left = c.generator(o.j);
      c.multiply(left, gen_power(o.i, oi));
      auto right = c.generator(o.j);
      c.multiply_generator(right, o.i);
      c.multiply_generator(right, o.i, oi - 1);
      return {left, right};
    }
    case OverlapKind::PowerSelf: {
      const int oi = c.presentation().relative_order(o.i);
      auto left = gen_power(o.i, oi);
      c.multiply_generator(left, o.i);
      auto right = c.generator(o.i);
      c.multiply(right, gen_power(o.i, oi));
      return {left, right};
    }
  }
  throw std::logic_error("unknown overlap kind");
}

ConsistencyReport check_consistency(const PcPresentation& p) {
  ConsistencyReport r;
  Collector c(p);
  for (const auto& o : overlaps(p.rank())) {
    auto [l, rr] = evaluate_overlap(c, o);
    if (l.exponents != rr.exponents) {
      r.consistent = false;
      r.failures.push_back({o, l.exponents, rr.exponents});
    }
  }
  return r;
}

namespace {

/// First index c such that every generator >= c is central by inspection of
/// the conjugate relations.
int central_segment_start(const PcPresentation& p) {
  const int n = p.rank();
  int c = n;
  while (c > 0) {
    const int l = c - 1;
    bool central = true;
    for (int i = 0; i < l && central; ++i)
      if (!p.conjugate_is_trivial(l, i)) central = false;
    for (int j = l + 1; j < n && central; ++j)
      if (!p.conjugate_is_trivial(j, l)) central = false;
    if (!central) break;
    c = l;
  }
  return c;
}

}  // namespace

EnforcedQuotient enforced_quotient(const PcPresentation& input, int max_rounds) {
  PcPresentation p = input;
  for (int round = 0; round <= max_rounds; ++round) {
    auto report = check_consistency(p);
    if (report.consistent) return {p, p.nominal_order(), round};
    if (round == max_rounds) break;

    const int n = p.rank();
    const int c = central_segment_start(p);
    const auto s = static_cast<std::size_t>(n - c);
    linalg::IntMatrix lattice(0, s);
    std::vector<long long> row(s);
    for (int l = c; l < n; ++l) {
      for (std::size_t t = 0; t < s; ++t) row[t] = -p.power(l)[static_cast<std::size_t>(c) + t];
      row[static_cast<std::size_t>(l - c)] += p.relative_order(l);
      lattice.append_row(std::span<const long long>(row));
    }
    for (const auto& f : report.failures) {
      for (int l = 0; l < c; ++l)
        if (f.left[static_cast<std::size_t>(l)] != f.right[static_cast<std::size_t>(l)])
          throw NonCentralFailure("failure not central: overlap " + f.overlap.to_string() + " gives " +
                                  word_to_string(f.left, "f") + " vs " + word_to_string(f.right, "f"));
      for (std::size_t t = 0; t < s; ++t)
        row[t] = f.left[static_cast<std::size_t>(c) + t] - f.right[static_cast<std::size_t>(c) + t];
      lattice.append_row(std::span<const long long>(row));
    }
    const auto hnf = linalg::hermite_normal_form(lattice);

    // Pivot per segment column; full rank since the power rows are triangular.
    std::vector<long long> pivot(s, 0);
    std::vector<std::size_t> pivot_row(s, 0);
    for (std::size_t r = 0; r < hnf.rows(); ++r)
      for (std::size_t t = 0; t < s; ++t)
        if (hnf(r, t) != 0) {
          pivot[t] = hnf(r, t).get_si();
          pivot_row[t] = r;
          break;
        }
    for (std::size_t t = 0; t < s; ++t)
      if (pivot[t] <= 0) throw std::logic_error("central relation lattice lost full rank");

    auto reduce = [&](std::vector<mpz_class> v) {
      for (std::size_t t = 0; t < s; ++t) {
        if (v[t] == 0) continue;
        mpz_class q;
        mpz_fdiv_q_ui(q.get_mpz_t(), v[t].get_mpz_t(), static_cast<unsigned long>(pivot[t]));
        for (std::size_t u = t; u < s; ++u) v[u] -= q * hnf(pivot_row[t], u);
      }
      return v;
    };

    std::vector<int> new_index(static_cast<std::size_t>(n), -1);
    std::vector<int> orders;
    for (int l = 0; l < c; ++l) {
      new_index[static_cast<std::size_t>(l)] = static_cast<int>(orders.size());
      orders.push_back(p.relative_order(l));
    }
    for (std::size_t t = 0; t < s; ++t)
      if (pivot[t] > 1) {
        new_index[static_cast<std::size_t>(c) + t] = static_cast<int>(orders.size());
        orders.push_back(static_cast<int>(pivot[t]));
      }

    auto rewrite = [&](const Exponents& w) {
      Exponents out(orders.size(), 0);
      for (int l = 0; l < c; ++l) out[static_cast<std::size_t>(l)] = w[static_cast<std::size_t>(l)];
      std::vector<mpz_class> v(s);
      for (std::size_t t = 0; t < s; ++t) v[t] = w[static_cast<std::size_t>(c) + t];
      v = reduce(std::move(v));
      for (std::size_t t = 0; t < s; ++t) {
        const int ni = new_index[static_cast<std::size_t>(c) + t];
        if (ni >= 0) out[static_cast<std::size_t>(ni)] = static_cast<int>(v[t].get_si());
      }
      return out;
    };

    PcPresentation q(orders);
    for (int i = 0; i < c; ++i) {
      q.set_power(i, rewrite(p.power(i)));
      for (int j = i + 1; j < c; ++j) q.set_conjugate(j, i, rewrite(p.conjugate(j, i)));
    }
    for (std::size_t t = 0; t < s; ++t) {
      const int ni = new_index[static_cast<std::size_t>(c) + t];
      if (ni < 0) continue;
      std::vector<mpz_class> v(s);
      v[t] = static_cast<long>(pivot[t]);
      v = reduce(std::move(v));
      Exponents w(orders.size(), 0);
      for (std::size_t u = 0; u < s; ++u) {
        const int nu = new_index[static_cast<std::size_t>(c) + u];
        if (nu >= 0) w[static_cast<std::size_t>(nu)] = static_cast<int>(v[u].get_si());
      }
      q.set_power(ni, std::move(w));
    }
    p = std::move(q);
  }
  throw NonCentralFailure("enforced quotient did not stabilise within " + std::to_string(max_rounds) + " rounds");
}

// ---- Structure ---------------------------------------------------------------

Subgroup center(const PcGroup& g, std::uint64_t budget) {
  std::vector<Element> gens;
  for (int k = 0; k < g.rank(); ++k) gens.push_back(g.generator(k));
  Subgroup z;
  enumerate_elements(
      g,
      [&](const Element& x) {
        for (const auto& s : gens)
          if (g.multiply(x, s) != g.multiply(s, x)) return;
        z.elements.push_back(g.index_of(x));
      },
      budget);
  // Generators: a minimal-ish set found greedily from the element list.
  std::unordered_set<std::uint64_t> covered{g.index_of(g.identity())};
  for (auto idx : z.elements) {
    if (covered.count(idx)) continue;
    z.generators.push_back(g.element_at(idx));
    auto span = generate_subgroup(g, z.generators, budget);
    covered.insert(span.elements.begin(), span.elements.end());
  }
  z.is_normal = true;
  return z;
}

Subgroup derived_subgroup(const PcGroup& g, std::uint64_t budget) {
  std::vector<Element> gens;
  for (int i = 0; i < g.rank(); ++i)
    for (int j = i + 1; j < g.rank(); ++j) {
      auto c = g.commutator(g.generator(j), g.generator(i));
      if (!g.is_identity(c)) gens.push_back(c);
    }
  for (;;) {
    auto h = generate_subgroup(g, gens, budget);
    if (h.is_normal) return h;
    for (const auto& x : std::vector<Element>(h.generators))
      for (int k = 0; k < g.rank(); ++k) {
        auto y = g.conjugate(x, g.generator(k));
        if (!h.contains(g.index_of(y))) gens.push_back(y);
      }
  }
}

AbelianInvariants abelianization(const PcPresentation& p) {
  const int n = p.rank();
  linalg::IntMatrix m(0, static_cast<std::size_t>(n));
  std::vector<long long> row(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) row[static_cast<std::size_t>(l)] = -p.power(i)[static_cast<std::size_t>(l)];
    row[static_cast<std::size_t>(i)] += p.relative_order(i);
    m.append_row(std::span<const long long>(row));
    for (int j = i + 1; j < n; ++j) {
      if (p.conjugate_is_trivial(j, i)) continue;
      for (int l = 0; l < n; ++l) row[static_cast<std::size_t>(l)] = -p.conjugate(j, i)[static_cast<std::size_t>(l)];
      row[static_cast<std::size_t>(j)] += 1;
      m.append_row(std::span<const long long>(row));
    }
  }
  return linalg::cokernel_invariants(m);
}

std::uint64_t exponent(const PcGroup& g, std::uint64_t budget) {
  std::uint64_t e = 1;
  enumerate_elements(g, [&](const Element& x) { e = std::lcm(e, g.element_order(x)); }, budget);
  return e;
}

PcPresentation quotient_by_tail(const PcPresentation& p, int k) {
  const int n = p.rank();
  if (k < 0 || k > n) throw std::out_of_range("terminal segment index");
  // Normality: conjugates of segment generators must stay in the segment.
  for (int l = k; l < n; ++l)
    for (int i = 0; i < l; ++i)
      for (int t = 0; t < k; ++t)
        if (p.conjugate(l, i)[static_cast<std::size_t>(t)] != 0)
          throw PresentationError("terminal segment is not normal");
  auto truncate = [&](const Exponents& w) { return Exponents(w.begin(), w.begin() + k); };
  PcPresentation q(std::vector<int>(p.relative_orders().begin(), p.relative_orders().begin() + k));
  for (int i = 0; i < k; ++i) {
    q.set_power(i, truncate(p.power(i)));
    for (int j = i + 1; j < k; ++j) q.set_conjugate(j, i, truncate(p.conjugate(j, i)));
  }
  return q;
}

PcPresentation direct_product(const PcPresentation& a, const PcPresentation& b) {
  const int na = a.rank();
  const int nb = b.rank();
  std::vector<int> orders = a.relative_orders();
  orders.insert(orders.end(), b.relative_orders().begin(), b.relative_orders().end());
  PcPresentation p(orders);
  auto from_a = [&](const Exponents& w) {
    Exponents out(orders.size(), 0);
    std::copy(w.begin(), w.end(), out.begin());
    return out;
  };
  auto from_b = [&](const Exponents& w) {
    Exponents out(orders.size(), 0);
    std::copy(w.begin(), w.end(), out.begin() + na);
    return out;
  };
  for (int i = 0; i < na; ++i) {
    p.set_power(i, from_a(a.power(i)));
    for (int j = i + 1; j < na; ++j) p.set_conjugate(j, i, from_a(a.conjugate(j, i)));
  }
  for (int i = 0; i < nb; ++i) {
    p.set_power(na + i, from_b(b.power(i)));
    for (int j = i + 1; j < nb; ++j) p.set_conjugate(na + j, na + i, from_b(b.conjugate(j, i)));
  }
  return p;
}

}  // namespace b0kit
