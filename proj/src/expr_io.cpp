#include "aho/expr_io.hpp"

#include <map>
#include <sstream>
#include <vector>

#include "aho/errors.hpp"

namespace aho {

using nlohmann::ordered_json;

ordered_json expr_to_json(const HypExpr& e) {
  if (e.has_log()) throw AlgebraError("io: log-generator terms are not serializable");
  ordered_json j;
  j["nu"] = (e.nu() == Nu::Half) ? "omega/2" : "omega";
  j["m"] = e.denom_power();
  ordered_json terms = ordered_json::array();
  for (const auto& [k, c] : e.terms()) {
    ordered_json t;
    t["num"] = c.numerator_str();
    t["den"] = c.denominator_str();
    t["a"] = k.a;
    t["b"] = k.b;
    t["eh"] = k.eh;
    t["em"] = k.em;
    t["ew"] = k.ew;
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

HypExpr expr_from_json(const ordered_json& j) {
  Nu nu = (j.at("nu").get<std::string>() == "omega/2") ? Nu::Half : Nu::Full;
  HypBuilder b(nu, j.at("m").get<int>());
  for (const auto& t : j.at("terms")) {
    Rational c = Rational::from_strings(t.at("num").get<std::string>(),
                                        t.at("den").get<std::string>());
    TermKey k{t.at("a").get<int>(), t.at("b").get<int>(), t.at("eh").get<int>(),
              t.at("em").get<int>(), t.at("ew").get<int>(), 0};
    b.add(k, c);
  }
  return std::move(b).build();
}

namespace {

std::string rational_latex(const Rational& q, bool leading) {
  std::ostringstream os;
  Rational a = q.abs();
  if (leading) {
    if (q.sign() < 0) os << "-";
  } else {
    os << (q.sign() < 0 ? " - " : " + ");
  }
  if (a.denominator_str() == "1") {
    os << a.numerator_str();
  } else {
    os << "\\frac{" << a.numerator_str() << "}{" << a.denominator_str() << "}";
  }
  return os.str();
}

void append_params(std::ostream& os, int eh, int em, int ew) {
  auto one = [&os](const char* sym, int e) {
    if (e == 0) return;
    os << sym;
    if (e != 1) os << "^{" << e << "}";
    os << " ";
  };
  one("\\hbar", eh);
  one("M", em);
  one("\\omega", ew);
}

}  // namespace

std::string expr_to_latex(const HypExpr& e) {
  if (e.is_zero()) return "0";
  const char* arg = (e.nu() == Nu::Half) ? "\\omega\\tau/2" : "\\omega\\tau";

  // Pair b with -b into sinh/cosh multi-angle pieces, keyed for display by
  // (a, |b|, params, kind).
  struct Piece {
    Rational coeff;
    int a, k, eh, em, ew;
    int kind;  // 0: constant/tau power, 1: sinh, 2: cosh, 3: log generator
  };
  std::vector<Piece> pieces;
  std::map<TermKey, Rational> seen = e.terms();
  while (!seen.empty()) {
    auto [k, c] = *seen.begin();
    seen.erase(seen.begin());
    if (k.elog == 1) {
      pieces.push_back({c, k.a, 0, k.eh, k.em, k.ew, 3});
      continue;
    }
    if (k.b == 0) {
      pieces.push_back({c, k.a, 0, k.eh, k.em, k.ew, 0});
      continue;
    }
    TermKey mirror = k;
    mirror.b = -k.b;
    Rational cm(0);
    if (auto it = seen.find(mirror); it != seen.end()) {
      cm = it->second;
      seen.erase(it);
    }
    int kk = std::abs(k.b);
    Rational chigh = (k.b > 0) ? c : cm;
    Rational clow = (k.b > 0) ? cm : c;
    Rational sinh_c = chigh - clow;
    Rational cosh_c = chigh + clow;
    if (!sinh_c.is_zero()) pieces.push_back({sinh_c, k.a, kk, k.eh, k.em, k.ew, 1});
    if (!cosh_c.is_zero()) pieces.push_back({cosh_c, k.a, kk, k.eh, k.em, k.ew, 2});
  }

  std::ostringstream os;
  bool first = true;
  for (const auto& p : pieces) {
    os << rational_latex(p.coeff, first);
    first = false;
    append_params(os, p.eh, p.em, p.ew);
    if (p.a != 0) {
      os << "\\tau";
      if (p.a != 1) os << "^{" << p.a << "}";
    }
    if (p.kind == 1 || p.kind == 2) {
      os << (p.kind == 1 ? "\\sinh" : "\\cosh");
      if (p.k != 1) os << " " << p.k;
      os << arg;
    } else if (p.kind == 3) {
      os << "\\ln\\sinh" << arg;
    }
  }
  std::string body = os.str();
  if (e.denom_power() == 0) return body;
  std::ostringstream full;
  full << "\\frac{1}{\\sinh";
  if (e.denom_power() != 1) full << "^{" << e.denom_power() << "}";
  full << arg << "}\\left(" << body << "\\right)";
  return full.str();
}

}  // namespace aho
