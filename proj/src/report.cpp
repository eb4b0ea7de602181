#include "b0kit/report.hpp"

#include <cstdio>
#include <sstream>

namespace b0kit::report {

json to_json(const AbelianInvariants& a) { return json{{"torsion", a.torsion}, {"free_rank", a.free_rank}}; }

AbelianInvariants invariants_from_json(const json& j) {
  if (!j.is_object() || !j.contains("torsion") || !j.contains("free_rank"))
    throw std::invalid_argument("expected {\"torsion\": [...], \"free_rank\": n}");
  AbelianInvariants a;
  a.torsion = j.at("torsion").get<std::vector<std::uint64_t>>();
  a.free_rank = j.at("free_rank").get<int>();
  a.validate();
  return a;
}

json to_json(const Element& e) { return e.exponents; }

json to_json(const bogomolov::B0Result& r) {
  return json{{"group", r.group},
              {"fingerprint", r.fingerprint},
              {"order", r.order},
              {"b0", to_json(r.b0)},
              {"b0_order", r.b0.order()},
              {"multiplier", to_json(r.multiplier)},
              {"m0_generator_count", r.m0_generator_count},
              {"strategy", kernels::to_string(r.strategy)},
              {"pairs_visited", r.pairs_visited},
              {"early_exit", r.early_exit},
              {"seconds", r.seconds}};
}

bogomolov::B0Result b0_from_json(const json& j) {
  bogomolov::B0Result r;
  r.group = j.at("group").get<std::string>();
  r.fingerprint = j.at("fingerprint").get<std::string>();
  r.order = j.at("order").get<std::uint64_t>();
  r.b0 = invariants_from_json(j.at("b0"));
  r.multiplier = invariants_from_json(j.at("multiplier"));
  r.m0_generator_count = j.at("m0_generator_count").get<std::uint64_t>();
  r.strategy = kernels::parse_strategy(j.at("strategy").get<std::string>());
  r.pairs_visited = j.at("pairs_visited").get<std::uint64_t>();
  r.early_exit = j.at("early_exit").get<bool>();
  r.seconds = j.at("seconds").get<double>();
  return r;
}

json to_json(const certificate::Certificate& c) {
  json j{{"group", c.group},
         {"fingerprint", c.fingerprint},
         {"segment_start", c.segment_start + 1},
         {"n_order", c.n_order},
         {"t", c.t},
         {"h", c.h},
         {"quotient_multiplier", to_json(c.quotient_multiplier)},
         {"transgression_not_onto", c.transgression_not_onto},
         {"pair_scan_passed", c.pair_scan_passed},
         {"strategy", kernels::to_string(c.strategy)},
         {"pairs_scanned", c.pairs_scanned},
         {"b0_lower_bound", c.b0_lower_bound},
         {"valid", c.valid},
         {"seconds", c.seconds}};
  if (c.failing_pair) j["failing_pair"] = {to_json(c.failing_pair->x), to_json(c.failing_pair->y)};
  return j;
}

json to_json(const certificate::LemfReport& r) {
  return json{{"shape", r.shape},         {"p", r.p},
              {"condition_i", r.condition_i}, {"condition_ii", r.condition_ii},
              {"condition_iii", r.condition_iii}, {"holds", r.holds()},
              {"notes", r.notes}};
}

json to_json(const acceptance::CriterionResult& r) {
  return json{{"id", r.id},
              {"title", r.title},
              {"passed", r.passed()},
              {"correct", r.correct},
              {"seconds", r.seconds},
              {"limit_seconds", r.limit_seconds},
              {"detail", r.detail}};
}

std::string to_text(const bogomolov::B0Result& r) {
  std::ostringstream s;
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.3f", r.seconds);
  s << "group        " << r.group << "\n"
    << "fingerprint  " << r.fingerprint << "\n"
    << "order        " << r.order << "\n"
    << "M(G)         " << r.multiplier.to_string() << "\n"
    << "B0(G)        " << r.b0.to_string() << "\n"
    << "M0 classes   " << r.m0_generator_count << "\n"
    << "strategy     " << kernels::to_string(r.strategy) << " (" << r.pairs_visited << " commuting pairs"
    << (r.early_exit ? ", early exit" : "") << ")\n"
    << "seconds      " << secs << "\n";
  return s.str();
}

std::string to_text(const certificate::Certificate& c) {
  std::ostringstream s;
  s << "group        " << c.group << "\n"
    << "fingerprint  " << c.fingerprint << "\n"
    << "N            <g" << c.segment_start + 1 << ",...> of order " << c.n_order << "\n"
    << "t            " << c.t << "  (G-fixed characters of N)\n"
    << "h            " << c.h << "  (M(G/N) = " << c.quotient_multiplier.to_string() << ")\n"
    << "t < h        " << (c.transgression_not_onto ? "yes" : "no") << "\n"
    << "pair scan    " << (c.pair_scan_passed ? "passed" : "failed") << " (" << c.pairs_scanned << " pairs, "
    << kernels::to_string(c.strategy) << ")\n";
  if (c.failing_pair)
    s << "witness      x=" << word_to_string(c.failing_pair->x.exponents, "f")
      << " y=" << word_to_string(c.failing_pair->y.exponents, "f") << "\n";
  s << "certificate  " << (c.valid ? "valid, |B0| >= " + std::to_string(c.b0_lower_bound) : "not emitted") << "\n";
  return s.str();
}

}  // namespace b0kit::report
