#include "dml/report.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

#include "dml/degrees.hpp"
#include "dml/density.hpp"
#include "dml/errors.hpp"
#include "dml/heights.hpp"
#include "dml/interpolate.hpp"
#include "dml/parse.hpp"

namespace dml {

namespace {

const std::set<std::string> kTopKeys{"version", "command", "field", "map", "point", "target", "targets",
                                     "recurrence", "config", "interp", "degree", "height", "density"};
const std::set<std::string> kConfigKeys{"primes", "k", "k_max", "e_cap", "n_max", "k_evidence", "bit_budget",
                                        "state_cap", "class_cap", "prime_attempts", "zero_search_depth", "term_budget"};

std::vector<std::string> string_list(const Json& v, const std::string& key) {
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) throw SchemaError("'" + key + "' must be a string or an array");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (e.is_string()) {
      out.push_back(e.get<std::string>());
    } else if (e.is_number_integer()) {
      out.push_back(e.dump());
    } else {
      throw SchemaError("entries of '" + key + "' must be strings or integers");
    }
  }
  return out;
}

template <class T>
T get_uint(const Json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw SchemaError("'" + key + "' must be a nonnegative integer");
  return static_cast<T>(v.get<unsigned long long>());
}

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw SchemaError("'" + where + "' must be an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw SchemaError("unknown key '" + k + "' in " + where);
}

Field parse_field(const Json& v) {
  std::string kind;
  std::uint64_t p = 0;
  if (v.is_string()) {
    kind = v.get<std::string>();
  } else if (v.is_object()) {
    check_keys(v, {"kind", "p"}, "field");
    if (!v.contains("kind") || !v.at("kind").is_string()) throw SchemaError("field needs a string 'kind'");
    kind = v.at("kind").get<std::string>();
    p = get_uint<std::uint64_t>(v, "p", 0);
  } else {
    throw SchemaError("'field' must be a string or an object");
  }
  if (kind == "rational" || kind == "Q") return Field::rational();
  if (kind == "fpt" || kind == "fp") {
    if (!is_prime(p)) throw SchemaError("field '" + kind + "' needs a prime 'p'");
    return kind == "fpt" ? Field::function_field(p) : Field::prime_field(p);
  }
  throw SchemaError("unknown field kind '" + kind + "'");
}

mpq_class parse_exact(const Json& v, const std::string& what) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    try {
      return parse_scalar(s, Field::rational()).rational();
    } catch (const ParseError& e) {
      throw SchemaError("bad " + what + " '" + s + "': " + e.what());
    }
  }
  // Decimal literal, read exactly.
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  const std::size_t places = s.size() - dot - 1;
  mpz_class num;
  if (digits.empty() || num.set_str(digits, 10) != 0) throw SchemaError("bad " + what + " '" + s + "'");
  mpq_class q(num, prime_power(10, static_cast<long>(places)));
  q.canonicalize();
  return q;
}

std::string q_str(const mpq_class& q) { return q.get_str(); }

Json height_json(const HeightRecord& h) {
  if (h.field == FieldKind::Rational) return Json{{"logOf", h.H.get_str()}};
  return Json(h.H.get_ui());
}

Json hplus_json(const HeightRecord& h) { return h.plus_is_one() ? Json(1) : height_json(h); }

bool in_unresolved(const ReturnSet& rs, std::uint64_t n) {
  return std::any_of(rs.unresolved.begin(), rs.unresolved.end(), [n](const UnresolvedClass& u) {
    return n >= u.offset && (n - u.offset) % u.modulus == 0;
  });
}

Json oracle_json(const ReturnSet& rs, const std::vector<std::uint64_t>& hits, std::uint64_t horizon) {
  std::vector<std::uint64_t> expected;
  for (auto n : hits)
    if (!in_unresolved(rs, n)) expected.push_back(n);
  std::vector<std::uint64_t> got;
  for (auto n : rs.members_up_to(horizon))
    if (!in_unresolved(rs, n)) got.push_back(n);
  return Json{{"horizon", horizon}, {"agrees", expected == got}};
}

struct Built {
  PolyMap f;
  Point x;
  std::vector<MultiPoly> targets;
};

Built build_orbit(const ProblemFile& pf, bool need_target) {
  if (pf.map.empty()) throw SchemaError(to_string(pf.command) + " needs 'map'");
  Built b;
  b.f = parse_map(pf.map, pf.field);
  if (pf.point.size() != b.f.dim())
    throw SchemaError("'point' has " + std::to_string(pf.point.size()) + " coordinates, map has " +
                      std::to_string(b.f.dim()));
  b.x = parse_point(pf.point, pf.field);
  for (const auto& t : pf.targets) b.targets.push_back(parse_poly(t, b.f.dim(), pf.field));
  if (need_target && b.targets.empty()) throw SchemaError(to_string(pf.command) + " needs 'target'");
  return b;
}

OrbitProblem orbit_problem(const Built& b) {
  std::vector<MultiPoly> extra(b.targets.begin() + 1, b.targets.end());
  return OrbitProblem(b.f, b.x, b.targets.front(), extra);
}

void run_orbit(const ProblemFile& pf, Report& r) {
  const Built b = build_orbit(pf, true);
  const OrbitProblem prob = orbit_problem(b);
  const auto& cfg = pf.config;
  if (!pf.field.is_rational()) {
    const auto scan = brute_force_scan(prob, cfg.n_max, cfg.bit_budget);
    r.result = {{"method", "brute-force"}, {"hits", scan.hits}, {"horizon", scan.horizon},
                {"budget_exceeded", scan.budget_exceeded}};
    if (scan.exact_cycle) r.result["exact_cycle"] = {{"preperiod", scan.exact_cycle->first}, {"period", scan.exact_cycle->second}};
    r.status = scan.budget_exceeded ? "PARTIAL" : "COMPLETE";
    return;
  }
  const ReturnSet rs = classify_returns(prob, cfg);
  r.result = return_set_json(rs);
  const auto scan = brute_force_scan(prob, cfg.n_max, cfg.bit_budget);
  r.result["oracle"] = oracle_json(rs, scan.hits, scan.horizon);
  r.status = to_string(rs.status);
  r.certificate = certificate_json(rs.certificate);
}

void run_sml(const ProblemFile& pf, Report& r) {
  if (!pf.field.is_rational()) throw FieldMismatch("sml runs over Q");
  if (pf.recurrence_coeffs.empty()) throw SchemaError("sml needs 'recurrence'");
  std::vector<mpq_class> a, init;
  for (const auto& s : pf.recurrence_coeffs) a.push_back(parse_scalar(s, pf.field).rational());
  for (const auto& s : pf.recurrence_initial) init.push_back(parse_scalar(s, pf.field).rational());
  const Recurrence rec(a, init);
  const ReturnSet rs = sml_solve(rec, pf.config);
  r.result = return_set_json(rs);
  const std::uint64_t horizon = pf.config.n_max;
  const auto terms = rec.terms(horizon + 1);
  std::vector<std::uint64_t> zeros;
  for (std::uint64_t n = 0; n <= horizon; ++n)
    if (terms[n] == 0) zeros.push_back(n);
  r.result["oracle"] = oracle_json(rs, zeros, horizon);
  r.status = to_string(rs.status);
  r.certificate = certificate_json(rs.certificate);
}

void run_interp(const ProblemFile& pf, Report& r) {
  if (!pf.field.is_rational()) throw FieldMismatch("interp runs over Q");
  const Json& s = pf.section;
  check_keys(s, {"prime", "precision", "center", "scale", "iterate", "check", "degree_cap", "route"}, "interp");
  if (pf.map.empty()) throw SchemaError("interp needs 'map'");
  const PolyMap f = parse_map(pf.map, pf.field);
  const std::uint64_t p = get_uint<std::uint64_t>(s, "prime", 0);
  if (!is_prime(p)) throw SchemaError("interp needs a prime 'prime'");
  const long k = get_uint<long>(s, "precision", pf.config.k);
  const long e = get_uint<long>(s, "scale", 1);
  const std::uint64_t m = get_uint<std::uint64_t>(s, "iterate", 1);
  const std::uint64_t check = get_uint<std::uint64_t>(s, "check", 20);
  const std::string route = s.value("route", std::string("action"));
  if (route != "action" && route != "orbit") throw SchemaError("interp route must be 'action' or 'orbit'");
  if (k < 1) throw SchemaError("precision must be positive");

  AffinoidSelfMap H = AffinoidSelfMap::from_polymap(f, p, k);
  if (s.contains("center")) {
    const Point c = parse_point(string_list(s.at("center"), "center"), pf.field);
    std::vector<mpz_class> y;
    for (const auto& v : c.coords()) {
      if (v.rational().get_den() != 1) throw SchemaError("interp center must be integral");
      y.push_back(v.rational().get_num());
    }
    H = AffinoidSelfMap::recenter(f, y, p, e, m, k);
  }
  std::vector<mpz_class> base(H.dim(), 0);
  if (!pf.point.empty()) {
    const Point x = parse_point(pf.point, pf.field);
    if (x.dim() != H.dim()) throw DimensionMismatch("base point dimension does not match the map");
    for (std::size_t i = 0; i < x.dim(); ++i) base[i] = reduce_rational(x[i].rational(), p, k);
  }
  const DeltaNorm before = delta_norm(H);
  std::uint64_t N = 1;
  if (!RConstant(p).exceeds_norm(before.d)) {
    const auto boosted = boost_iterate(H);
    N = boosted.N;
    H = boosted.map;
  }
  InterpolateOptions opts;
  opts.degree_cap = get_uint<std::uint64_t>(s, "degree_cap", 0);
  const InterpolationResult res = route == "action" ? interpolate_action(H, base, opts) : interpolate_orbit(H, base);
  const auto& c = res.certificate;
  const mpz_class mod = prime_power(p, c.tail);
  std::vector<std::uint64_t> failures;
  for (std::uint64_t n = 0; n <= check; ++n) {
    const auto want = H.iterate(base, n);
    const auto got = res.eval(mpz_class(static_cast<unsigned long>(n)));
    for (std::size_t j = 0; j < want.size(); ++j) {
      mpz_class w;
      mpz_mod(w.get_mpz_t(), want[j].get_mpz_t(), mod.get_mpz_t());
      if (got[j].residue(c.tail) != w) {
        failures.push_back(n);
        break;
      }
    }
  }
  Json series = Json::array();
  for (const auto& g : res.series) {
    Json coeffs = Json::array();
    for (std::size_t i = 0; i < g.size(); ++i) coeffs.push_back(q_str(g.coefficient(i).representative()));
    series.push_back({{"tail", g.tail()}, {"coefficients", coeffs}});
  }
  r.result = {{"prime", p},
              {"precision", H.precision()},
              {"route", route},
              {"boost", N},
              {"delta", {{"d", before.d}, {"exact", before.exact}}},
              {"series", series},
              {"checks", {{"through", check}, {"failures", failures}}}};
  r.certificate = {{"p", c.p},
                   {"d", c.d},
                   {"d_exact", c.d_exact},
                   {"r_comparison", c.r_comparison},
                   {"degree", c.degree},
                   {"tail", c.tail},
                   {"working_precision", c.working_precision},
                   {"degree_cap", c.degree_cap},
                   {"boost", N}};
  if (c.truncation_valuation != kInfiniteValuation) r.certificate["truncation_valuation"] = c.truncation_valuation;
  r.status = failures.empty() ? "CERTIFIED" : "PARTIAL";
}

void run_degree(const ProblemFile& pf, Report& r) {
  const Json& s = pf.section;
  check_keys(s, {"n_max", "term_budget"}, "degree");
  if (pf.map.empty()) throw SchemaError("degree needs 'map'");
  const PolyMap f = parse_map(pf.map, pf.field);
  const auto seq = degree_sequence(f, get_uint<std::uint64_t>(s, "n_max", 20), get_uint<std::uint64_t>(s, "term_budget", pf.term_budget));
  const IntegerRoot lam = seq.lambda();
  Json lambda = {{"radicand", lam.radicand.get_str()}, {"index", lam.index}, {"exact", nullptr}};
  if (auto e = lam.exact()) lambda["exact"] = e->get_str();
  r.result = {{"degrees", seq.degrees},
              {"requested", seq.requested},
              {"budget_exceeded", seq.budget_exceeded},
              {"lambda", lambda},
              {"submultiplicative", !seq.submultiplicativity_violation().has_value()},
              {"estimate", {{"lambda", lam.estimate()}, {"successive_ratios", seq.successive_ratios()}}}};
  r.status = seq.budget_exceeded ? "PARTIAL" : "COMPLETE";
}

void run_height(const ProblemFile& pf, Report& r) {
  const Json& s = pf.section;
  check_keys(s, {"n_max", "epsilons", "lambda", "bit_budget"}, "height");
  const Built b = build_orbit(pf, false);
  const std::uint64_t n_max = get_uint<std::uint64_t>(s, "n_max", 20);
  const std::uint64_t budget = get_uint<std::uint64_t>(s, "bit_budget", std::uint64_t{1} << 24);
  const auto prof = arithmetic_degree_profile(b.f, b.x, n_max, budget);
  Json rows = Json::array();
  for (const auto& e : prof.entries) {
    Json row = {{"n", e.height.n}, {"height", height_json(e.height)}, {"hplus", hplus_json(e.height)}};
    if (e.root) row["root_estimate"] = *e.root;
    rows.push_back(row);
  }
  std::optional<mpq_class> lambda;
  if (s.contains("lambda")) lambda = parse_exact(s.at("lambda"), "lambda");
  Json eps_list = s.value("epsilons", Json::array({"1/10", "1/2"}));
  if (!eps_list.is_array()) throw SchemaError("'epsilons' must be an array");
  Json fits = Json::array();
  bool partial = prof.budget_exceeded;
  for (const auto& ev : eps_list) {
    const mpq_class eps = parse_exact(ev, "epsilon");
    const KsmFit fit = ksm_fit(b.f, b.x, eps, n_max, lambda, budget);
    partial = partial || fit.budget_exceeded;
    Json j = {{"epsilon", q_str(eps)},
              {"base", q_str(fit.base)},
              {"lambda_is_estimate", fit.lambda_is_estimate},
              {"C", fit.c_exact ? Json(q_str(*fit.c_exact)) : Json(nullptr)},
              {"C_decimal", fit.c_decimal},
              {"argmax", fit.argmax},
              {"equality", fit.equality},
              {"horizon", fit.horizon},
              {"finite", std::isfinite(fit.c)},
              {"estimate", {{"C", fit.c}}}};
    fits.push_back(j);
  }
  r.result = {{"profile", rows},
              {"budget_exceeded", prof.budget_exceeded},
              {"estimate", {{"upper", prof.upper}, {"lower", prof.lower}, {"last", prof.last}}},
              {"ksm", fits}};
  r.status = partial ? "PARTIAL" : "COMPLETE";
}

void run_density(const ProblemFile& pf, Report& r) {
  const Json& s = pf.section;
  check_keys(s, {"horizon", "windows", "set"}, "density");
  const std::uint64_t horizon = get_uint<std::uint64_t>(s, "horizon", pf.config.n_max);
  std::vector<std::uint64_t> set;
  std::string status = "COMPLETE";
  bool finite_certified = false;
  if (s.contains("set")) {
    if (!s.at("set").is_array()) throw SchemaError("'set' must be an array");
    for (const auto& v : s.at("set")) {
      if (!v.is_number_unsigned()) throw SchemaError("'set' entries must be nonnegative integers");
      set.push_back(v.get<std::uint64_t>());
    }
    finite_certified = true;
  } else {
    const Built b = build_orbit(pf, true);
    const OrbitProblem prob = orbit_problem(b);
    ClassifyConfig cfg = pf.config;
    cfg.n_max = std::max(cfg.n_max, horizon);
    if (pf.field.is_rational()) {
      const ReturnSet rs = classify_returns(prob, cfg);
      set = rs.members_up_to(horizon);
      status = to_string(rs.status);
      finite_certified = rs.status == Status::Certified && rs.is_finite();
      r.certificate = certificate_json(rs.certificate);
    } else {
      const auto scan = brute_force_scan(prob, horizon, cfg.bit_budget);
      set = scan.hits;
      if (scan.budget_exceeded) status = "PARTIAL";
    }
  }
  std::vector<std::uint64_t> windows;
  if (s.contains("windows")) {
    for (const auto& v : s.at("windows")) {
      if (!v.is_number_unsigned()) throw SchemaError("'windows' entries must be positive integers");
      windows.push_back(v.get<std::uint64_t>());
    }
  } else {
    windows = dyadic_windows(horizon);
  }
  const auto prof = density_profile(set, horizon, windows);
  Json rows = Json::array();
  bool bound_ok = true;
  for (const auto& w : prof.profile) {
    rows.push_back({{"L", w.length}, {"count", w.count}, {"start", w.start}, {"density", q_str(w.density())}});
    bound_ok = bound_ok && w.count <= prof.size;
  }
  r.result = {{"horizon", horizon}, {"size", prof.size}, {"profile", rows}};
  if (finite_certified) r.result["finite_bound_holds"] = bound_ok;
  r.status = status;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const UnknownVariable*>(&e)) return "UnknownVariable";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const SchemaError*>(&e)) return "SchemaError";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
  if (dynamic_cast<const FieldMismatch*>(&e)) return "FieldMismatch";
  if (dynamic_cast<const NonIntegralAtP*>(&e)) return "NonIntegralAtP";
  if (dynamic_cast<const BudgetExceeded*>(&e)) return "BudgetExceeded";
  if (dynamic_cast<const NoGoodPrime*>(&e)) return "NoGoodPrime";
  if (dynamic_cast<const ContractionNotCertified*>(&e)) return "ContractionNotCertified";
  if (dynamic_cast<const PrecisionExhausted*>(&e)) return "PrecisionExhausted";
  if (dynamic_cast<const DegenerateRecurrence*>(&e)) return "DegenerateRecurrence";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

std::string short_height(const Json& h) {
  if (!h.is_object()) return h.dump();
  const std::string H = h["logOf"].get<std::string>();
  if (H.size() <= 24) return "log " + H;
  return "log(" + std::to_string(H.size()) + "-digit integer)";
}

void text_return_set(std::ostringstream& os, const Json& res) {
  os << "progressions:";
  if (res["progressions"].empty()) os << " none";
  for (const auto& p : res["progressions"]) os << " {" << p["a"] << "n+" << p["b"] << "}";
  os << "\nsporadic: " << res["sporadic"].dump() << "\n";
  for (const auto& u : res["unresolved"])
    os << "unresolved: n = " << u["offset"] << " mod " << u["modulus"] << " (" << u["diagnostic"].get<std::string>() << ")\n";
  if (res.contains("oracle"))
    os << "brute force to " << res["oracle"]["horizon"] << ": " << (res["oracle"]["agrees"].get<bool>() ? "agrees" : "DISAGREES")
       << "\n";
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Orbit: return "orbit";
    case Command::Sml: return "sml";
    case Command::Interp: return "interp";
    case Command::Degree: return "degree";
    case Command::Height: return "height";
    case Command::Density: return "density";
  }
  return "?";
}

Command command_from_string(const std::string& s) {
  for (auto c : {Command::Orbit, Command::Sml, Command::Interp, Command::Degree, Command::Height, Command::Density})
    if (to_string(c) == s) return c;
  throw SchemaError("unknown command '" + s + "'");
}

ProblemFile parse_problem(const Json& doc) {
  check_keys(doc, kTopKeys, "problem");
  ProblemFile pf;
  pf.source = doc;
  pf.version = doc.value("version", 1);
  if (pf.version != 1) throw SchemaError("unsupported version " + std::to_string(pf.version));
  if (!doc.contains("command") || !doc.at("command").is_string()) throw SchemaError("missing string 'command'");
  pf.command = command_from_string(doc.at("command").get<std::string>());
  if (doc.contains("field")) pf.field = parse_field(doc.at("field"));
  if (doc.contains("map")) pf.map = string_list(doc.at("map"), "map");
  if (doc.contains("point")) pf.point = string_list(doc.at("point"), "point");
  if (doc.contains("target")) pf.targets = string_list(doc.at("target"), "target");
  if (doc.contains("targets")) {
    auto more = string_list(doc.at("targets"), "targets");
    pf.targets.insert(pf.targets.end(), more.begin(), more.end());
  }
  if (doc.contains("recurrence")) {
    const Json& r = doc.at("recurrence");
    check_keys(r, {"coefficients", "initial"}, "recurrence");
    if (!r.contains("coefficients") || !r.contains("initial")) throw SchemaError("recurrence needs 'coefficients' and 'initial'");
    pf.recurrence_coeffs = string_list(r.at("coefficients"), "coefficients");
    pf.recurrence_initial = string_list(r.at("initial"), "initial");
    if (pf.recurrence_coeffs.size() != pf.recurrence_initial.size())
      throw SchemaError("recurrence needs as many initial values as coefficients");
  }
  if (doc.contains("config")) {
    const Json& c = doc.at("config");
    check_keys(c, kConfigKeys, "config");
    auto& cfg = pf.config;
    if (c.contains("primes")) {
      // A single prime is accepted as a one-element list.
      const Json list = c.at("primes").is_array() ? c.at("primes") : Json::array({c.at("primes")});
      cfg.primes.clear();
      for (const auto& v : list) {
        if (!v.is_number_unsigned() || !is_prime(v.get<std::uint64_t>())) throw SchemaError("'primes' must list primes");
        cfg.primes.push_back(v.get<std::uint64_t>());
      }
    }
    cfg.k = get_uint<long>(c, "k", cfg.k);
    cfg.k_max = get_uint<long>(c, "k_max", cfg.k_max);
    cfg.e_cap = get_uint<long>(c, "e_cap", cfg.e_cap);
    cfg.n_max = get_uint<std::uint64_t>(c, "n_max", cfg.n_max);
    cfg.k_evidence = get_uint<std::uint64_t>(c, "k_evidence", cfg.k_evidence);
    cfg.bit_budget = get_uint<std::uint64_t>(c, "bit_budget", cfg.bit_budget);
    cfg.state_cap = get_uint<std::uint64_t>(c, "state_cap", cfg.state_cap);
    cfg.class_cap = get_uint<std::uint64_t>(c, "class_cap", cfg.class_cap);
    cfg.prime_attempts = get_uint<std::size_t>(c, "prime_attempts", cfg.prime_attempts);
    cfg.zero_search_depth = get_uint<long>(c, "zero_search_depth", cfg.zero_search_depth);
    pf.term_budget = get_uint<std::uint64_t>(c, "term_budget", pf.term_budget);
    if (cfg.k < 1 || cfg.k_max < cfg.k) throw SchemaError("config needs 1 <= k <= k_max");
  }
  const std::string name = to_string(pf.command);
  for (const char* sec : {"interp", "degree", "height", "density"})
    if (doc.contains(sec) && name != sec) throw SchemaError("section '" + std::string(sec) + "' does not apply to " + name);
  if (doc.contains(name)) pf.section = doc.at(name);
  if (!pf.section.is_object()) throw SchemaError("'" + name + "' must be an object");
  return pf;
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw SchemaError("override '" + assignment + "' is not key=value");
  std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) {
    if (text.find(',') != std::string::npos) {
      value = Json::array();
      std::stringstream ss(text);
      for (std::string part; std::getline(ss, part, ',');) {
        Json v = Json::parse(part, nullptr, false);
        value.push_back(v.is_discarded() ? Json(part) : v);
      }
    } else {
      value = text;
    }
  }
  if (key.find('.') == std::string::npos && !kTopKeys.count(key)) key = "config." + key;
  Json* node = &doc;
  std::stringstream ks(key);
  std::vector<std::string> parts;
  for (std::string part; std::getline(ks, part, '.');) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i])) (*node)[parts[i]] = Json::object();
    node = &(*node)[parts[i]];
    if (!node->is_object()) throw SchemaError("override path '" + key + "' crosses a non-object");
  }
  (*node)[parts.back()] = value;
}

ProblemFile parse_problem_text(std::string_view text, const std::vector<std::string>& overrides) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_problem(doc);
}

int Report::exit_code() const {
  if (status == "CERTIFIED" || status == "COMPLETE") return 0;
  if (status == "PARTIAL" || status == "CERTIFIED-NUMERIC") return 2;
  return 3;
}

Json Report::to_json() const {
  return Json{{"command", command},
              {"input", input},
              {"result", result},
              {"status", status},
              {"certificate", certificate},
              {"timing", {{"ms", timing_ms}}},
              {"tool", {{"name", "dml"}, {"version", version}}},
              {"exit_code", exit_code()}};
}

Report Report::from_json(const Json& j) {
  Report r;
  r.command = j.at("command").get<std::string>();
  r.input = j.at("input");
  r.result = j.at("result");
  r.status = j.at("status").get<std::string>();
  r.certificate = j.at("certificate");
  r.timing_ms = j.at("timing").at("ms").get<std::uint64_t>();
  r.version = j.at("tool").at("version").get<std::string>();
  return r;
}

bool Report::same_payload(const Report& o) const {
  return command == o.command && input == o.input && result == o.result && status == o.status &&
         certificate == o.certificate && version == o.version;
}

Report error_report(const std::string& command, const std::string& kind, const std::string& message,
                    std::optional<std::size_t> offset) {
  Report r;
  r.command = command;
  r.status = "ERROR";
  r.result = {{"error", {{"type", kind}, {"message", message}}}};
  if (offset) r.result["error"]["offset"] = *offset;
  return r;
}

Report run(const ProblemFile& pf) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.command = to_string(pf.command);
  r.input = pf.source;
  try {
    switch (pf.command) {
      case Command::Orbit: run_orbit(pf, r); break;
      case Command::Sml: run_sml(pf, r); break;
      case Command::Interp: run_interp(pf, r); break;
      case Command::Degree: run_degree(pf, r); break;
      case Command::Height: run_height(pf, r); break;
      case Command::Density: run_density(pf, r); break;
    }
  } catch (const std::exception& e) {
    std::optional<std::size_t> off;
    if (auto pe = dynamic_cast<const ParseError*>(&e)) off = pe->offset();
    Report err = error_report(r.command, error_kind(e), e.what(), off);
    err.input = r.input;
    r = std::move(err);
  }
  r.timing_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
  return r;
}

Format format_from_string(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "text") return Format::Text;
  throw SchemaError("unknown format '" + s + "'");
}

std::string emit(const Report& report, Format format) {
  if (format == Format::Json) return report.to_json().dump(2) + "\n";
  std::ostringstream os;
  const Json& res = report.result;
  os << "dml " << report.command << "\nstatus: " << report.status << "\n";
  if (report.status == "ERROR") {
    const Json& e = res["error"];
    os << "error: " << e["type"].get<std::string>() << ": " << e["message"].get<std::string>() << "\n";
  } else if (report.command == "orbit" && res.value("method", "") == "brute-force") {
    os << "brute-force hits to " << res["horizon"] << ": " << res["hits"].dump() << "\n";
  } else if (report.command == "orbit" || report.command == "sml") {
    text_return_set(os, res);
    const Json& c = report.certificate;
    if (c.contains("prime") && c["prime"] != 0)
      os << "certificate: " << c["method"].get<std::string>() << " at p=" << c["prime"] << ", class modulus "
         << c["class_modulus"] << "\n";
    else if (c.contains("method"))
      os << "certificate: " << c["method"].get<std::string>() << "\n";
  } else if (report.command == "interp") {
    os << "p=" << res["prime"] << " k=" << res["precision"] << " boost N=" << res["boost"] << "\n";
    os << "R check: " << report.certificate["r_comparison"].get<std::string>() << "\n";
    os << "series degree " << report.certificate["degree"] << ", tail p^" << report.certificate["tail"] << "\n";
    os << "G(n) = H^n(base) for n <= " << res["checks"]["through"] << ": "
       << (res["checks"]["failures"].empty() ? "all match" : "failures " + res["checks"]["failures"].dump()) << "\n";
  } else if (report.command == "degree") {
    os << "deg f^n: " << res["degrees"].dump() << "\n";
    const Json& l = res["lambda"];
    os << "lambda_1 estimate: "
       << (l["exact"].is_null() ? l["radicand"].get<std::string>() + "^(1/" + l["index"].dump() + ")"
                                : l["exact"].get<std::string>())
       << " ~ " << res["estimate"]["lambda"].get<double>() << "\n";
  } else if (report.command == "height") {
    for (const auto& row : res["profile"]) os << "n=" << row["n"] << " h=" << short_height(row["height"]) << "\n";
    for (const auto& f : res["ksm"])
      os << "KSM eps=" << f["epsilon"].get<std::string>() << ": C = "
         << (f["C"].is_null() ? f["C_decimal"].get<std::string>() : f["C"].get<std::string>()) << " at n=" << f["argmax"]
         << "\n";
  } else if (report.command == "density") {
    os << "|S n [0," << res["horizon"] << "]| = " << res["size"] << "\n";
    for (const auto& row : res["profile"])
      os << "L=" << row["L"] << " max " << row["count"] << " (start " << row["start"] << ") density "
         << row["density"].get<std::string>() << "\n";
  }
  os << "exit code: " << report.exit_code() << "\n";
  return os.str();
}

Json return_set_json(const ReturnSet& rs) {
  Json prog = Json::array();
  for (const auto& p : rs.progressions) prog.push_back({{"a", p.a}, {"b", p.b}});
  Json unres = Json::array();
  for (const auto& u : rs.unresolved) unres.push_back({{"modulus", u.modulus}, {"offset", u.offset}, {"diagnostic", u.diagnostic}});
  return Json{{"progressions", prog}, {"sporadic", rs.sporadic}, {"unresolved", unres}, {"status", to_string(rs.status)}};
}

Json certificate_json(const Certificate& c) {
  Json classes = Json::array();
  for (const auto& r : c.classes) {
    Json j = {{"modulus", r.modulus},
              {"offset", r.offset},
              {"method", r.method},
              {"delta_exponent", r.delta_exponent},
              {"hits", r.hits},
              {"precision", r.precision},
              {"tail", r.tail},
              {"series_degree", r.series_degree},
              {"separation_depth", r.separation_depth},
              {"backward_zeros", r.backward_zeros},
              {"strassmann_bound", nullptr}};
    if (r.strassmann_bound) j["strassmann_bound"] = *r.strassmann_bound;
    classes.push_back(j);
  }
  return Json{{"method", c.method},
              {"prime", c.prime},
              {"level", c.level},
              {"preperiod", c.preperiod},
              {"period", c.period},
              {"extension", c.extension},
              {"boost", c.boost},
              {"class_modulus", c.class_modulus},
              {"classes", classes},
              {"precision_ladder", c.precision_ladder},
              {"oracle_horizon", c.oracle_horizon},
              {"k_evidence", c.k_evidence},
              {"notes", c.notes}};
}

}  // namespace dml
