#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ccl/chebyshev.hpp"
#include "ccl/errors.hpp"
#include "ccl/problems.hpp"

namespace ccl {
namespace {

using nlohmann::json;

Interval read_interval(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(std::string(what) + ": expected [lo, hi]");
  Interval iv{j[0].get<double>(), j[1].get<double>()};
  if (!(iv.lo <= iv.hi)) throw ConfigError(std::string(what) + ": need lo <= hi");
  return iv;
}

FluxFamily read_flux(const json& j) {
  FluxFamily fam;
  fam.kind = j.at("kind").get<std::string>();
  fam.a = j.value("a", 1.0);
  fam.b = j.value("b", 0.0);
  fam.vmax = j.value("vmax", 1.0);
  fam.F0 = j.value("F0", 0.0);
  if (j.contains("nodes")) fam.nodes = j.at("nodes").get<std::vector<double>>();
  if (j.contains("slopes")) fam.slopes = j.at("slopes").get<std::vector<double>>();
  if (j.contains("p_domain")) {
    fam.p_domain = read_interval(j.at("p_domain"), "flux.p_domain");
  } else if (fam.kind == "tabulated" && fam.nodes.size() >= 2) {
    fam.p_domain = {fam.nodes.front(), fam.nodes.back()};
  }
  return fam;
}

json write_flux(const FluxFamily& fam) {
  json j{{"kind", fam.kind}, {"p_domain", {fam.p_domain.lo, fam.p_domain.hi}}};
  if (fam.kind == "quadratic") {
    j["a"] = fam.a;
    j["b"] = fam.b;
  } else if (fam.kind == "quartic") {
    j["a"] = fam.a;
  } else if (fam.kind == "lwr") {
    j["vmax"] = fam.vmax;
  } else {
    j["nodes"] = fam.nodes;
    j["slopes"] = fam.slopes;
    j["F0"] = fam.F0;
  }
  return j;
}

// Monomial coefficients on [a, b] to Chebyshev coefficients on the mapped piece.
std::vector<double> monomial_to_chebyshev(const std::vector<double>& mono, double a, double b) {
  const std::size_t n = std::max<std::size_t>(mono.size(), 1);
  const auto s = cheb::lobatto_points(n);
  std::vector<double> values(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double x = 0.5 * (a + b) + 0.5 * (b - a) * s[k];
    double v = 0.0;
    for (std::size_t i = mono.size(); i-- > 0;) v = v * x + mono[i];
    values[k] = v;
  }
  return cheb::chop(cheb::coeffs_from_lobatto(values), 1e-16);
}

PiecewiseFunction read_init(const json& j) {
  const auto bps = j.at("breakpoints").get<std::vector<double>>();
  const auto& pieces = j.at("pieces");
  if (!pieces.is_array() || bps.size() != pieces.size() + 1)
    throw ConfigError("init: need one piece per breakpoint interval");
  std::vector<std::vector<double>> coeffs;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (p.contains("const")) {
      coeffs.push_back({p.at("const").get<double>()});
    } else if (p.contains("poly")) {
      coeffs.push_back(monomial_to_chebyshev(p.at("poly").get<std::vector<double>>(), bps[i], bps[i + 1]));
    } else if (p.contains("chebyshev")) {
      coeffs.push_back(p.at("chebyshev").get<std::vector<double>>());
    } else {
      throw ConfigError("init: piece needs one of const, poly, chebyshev");
    }
  }
  return PiecewiseFunction(bps, std::move(coeffs));
}

}  // namespace

ProblemSpec problem_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("problem JSON: ") + e.what());
  }
  try {
    ProblemSpec spec;
    spec.name = doc.value("name", std::string("custom"));
    const auto fam = read_flux(doc.at("flux"));
    spec.flux = make_flux(fam);
    spec.family = fam;
    spec.init = InitialData::from_g(read_init(doc.at("init")));
    const auto& dom = doc.at("domain");
    spec.domain_x = read_interval(dom.at("x"), "domain.x");
    spec.domain_t = read_interval(dom.at("t"), "domain.t");
    const auto tr = doc.value("transform", std::string("none"));
    if (tr == "negate")
      spec.transform = OutputTransform::kNegate;
    else if (tr != "none")
      throw ConfigError("problem JSON: unknown transform '" + tr + "'");
    spec.notes = doc.value("notes", std::string());
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem JSON: ") + e.what());
  }
}

ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return problem_from_json(buf.str());
}

std::string problem_to_json(const ProblemSpec& spec) {
  if (!spec.family) throw ConfigError("problem '" + spec.name + "' has no serializable flux family");
  json pieces = json::array();
  for (std::size_t i = 0; i < spec.init.g.num_pieces(); ++i) pieces.push_back({{"chebyshev", spec.init.g.coeffs(i)}});
  json doc{
      {"name", spec.name},
      {"flux", write_flux(*spec.family)},
      {"init", {{"breakpoints", spec.init.g.breakpoints()}, {"pieces", pieces}}},
      {"domain",
       {{"x", {spec.domain_x.lo, spec.domain_x.hi}}, {"t", {spec.domain_t.lo, spec.domain_t.hi}}}},
      {"transform", spec.transform == OutputTransform::kNegate ? "negate" : "none"},
      {"notes", spec.notes},
  };
  return doc.dump(2);
}

}  // namespace ccl
