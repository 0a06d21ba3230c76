#include "config.hpp"

#include "domlab/error.hpp"

#include <fstream>
#include <set>

namespace domlab::cli {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::invalid_input, msg); }

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    bad(std::string("field \"") + what + "\" has the wrong type");
  }
}

std::map<std::string, int> parse_point_map(const json& j, const char* what) {
  if (j.is_null()) return {};
  if (!j.is_object()) bad(std::string("\"") + what + "\" must be an object of point: multiplicity");
  std::map<std::string, int> out;
  for (const auto& [id, m] : j.items()) {
    if (!m.is_number_integer()) bad(std::string("multiplicity of \"") + id + "\" in \"" + what + "\" must be an integer");
    out[id] = m.get<int>();
  }
  return out;
}

}  // namespace

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad("malformed JSON in '" + path + "': " + e.what());
  }
}

cplx parse_complex(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    bad(std::string("\"") + what + "\" must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

DivisorConfig parse_divisor_config(const json& j) {
  int genus = get<int>(require(j, "genus"), "genus");
  const json& phi_j = require(j, "phi");
  bool zero = phi_j.contains("zero") && get<bool>(phi_j.at("zero"), "phi.zero");
  auto zeros = parse_point_map(phi_j.contains("divisor") ? phi_j.at("divisor") : json(), "phi.divisor");
  auto d1 = parse_point_map(j.contains("D1") ? j.at("D1") : json(), "D1");
  auto d2 = parse_point_map(j.contains("D2") ? j.at("D2") : json(), "D2");

  std::vector<std::string> points;
  if (j.contains("points")) {
    points = get<std::vector<std::string>>(j.at("points"), "points");
  } else {
    std::set<std::string> ids;
    for (const auto* m : {&zeros, &d1, &d2}) {
      for (const auto& [id, v] : *m) ids.insert(id);
    }
    points.assign(ids.begin(), ids.end());
  }
  auto surface = divisor::SurfaceSpec::make(genus, points);
  if (zero && !zeros.empty()) bad("phi is marked zero but lists a divisor");
  auto phi = zero ? divisor::QDSpec::zero(surface)
                  : divisor::QDSpec::with_zeros(divisor::Divisor::from_values(surface, zeros));
  DivisorConfig cfg{surface, phi, divisor::Divisor::from_values(surface, d1),
                    divisor::Divisor::from_values(surface, d2), "thm_c", 1};
  if (j.contains("request")) cfg.request = get<std::string>(j.at("request"), "request");
  if (j.contains("k")) cfg.k = get<int>(j.at("k"), "k");
  return cfg;
}

json divisor_to_json(const divisor::Divisor& d) {
  json out = json::object();
  for (const auto& [id, m] : d.entries()) out[id] = m;
  return out;
}

Grid parse_grid(const json& j) {
  std::string type = j.contains("type") ? get<std::string>(j.at("type"), "grid.type") : "disc";
  if (type == "disc") {
    Circle c;
    if (j.contains("center")) c.center = parse_complex(j.at("center"), "grid.center");
    if (j.contains("radius")) c.radius = get<double>(j.at("radius"), "grid.radius");
    int n = j.contains("n") ? get<int>(j.at("n"), "grid.n") : 129;
    return Grid::disc(c, n);
  }
  if (type == "rectangle") {
    return Grid::rectangle(parse_complex(require(j, "origin"), "grid.origin"),
                           get<double>(require(j, "spacing"), "grid.spacing"), get<int>(require(j, "nx"), "grid.nx"),
                           get<int>(require(j, "ny"), "grid.ny"));
  }
  bad("unknown grid type '" + type + "'");
}

field::ConformalMetric parse_metric(const json& j) {
  if (j.is_null()) return field::ConformalMetric::flat();
  std::string name = get<std::string>(j, "metric");
  if (name == "flat") return field::ConformalMetric::flat();
  if (name == "hyperbolic") return field::ConformalMetric::hyperbolic_disc();
  bad("unknown metric '" + name + "'");
}

bochner::PolyQD parse_phi(const json& j) {
  bochner::PolyQD phi;
  if (j.is_null()) return phi;
  phi.leading = parse_complex(require(j, "leading"), "phi.leading");
  if (j.contains("roots")) {
    for (const auto& r : j.at("roots")) {
      phi.roots.push_back({parse_complex(require(r, "z"), "root.z"), get<int>(require(r, "m"), "root.m")});
    }
  }
  return phi;
}

std::vector<bochner::DivisorPoint> parse_placed_divisor(const json& j) {
  std::vector<bochner::DivisorPoint> out;
  if (j.is_null()) return out;
  if (!j.is_array()) bad("divisor must be a list of {\"z\", \"m\"}");
  for (const auto& p : j) out.push_back({parse_complex(require(p, "z"), "divisor.z"), get<int>(require(p, "m"), "divisor.m")});
  return out;
}

bochner::BoundaryTrace parse_boundary(const json& j) {
  if (j.is_null()) return bochner::BoundaryTrace::zero();
  if (j.is_string()) {
    if (j.get<std::string>() == "zero") return bochner::BoundaryTrace::zero();
    bad("unknown boundary '" + j.get<std::string>() + "'");
  }
  if (j.contains("values")) return bochner::BoundaryTrace::values(get<std::vector<double>>(j.at("values"), "boundary.values"));
  if (j.contains("constant")) return bochner::BoundaryTrace::constant(get<double>(j.at("constant"), "boundary.constant"));
  bad("boundary must be \"zero\", {\"values\": [...]} or {\"constant\": c}");
}

holonomy::MapSpec parse_map(const json& j) {
  std::string kind = get<std::string>(require(j, "kind"), "map.kind");
  if (kind == "constant") {
    return holonomy::MapSpec::constant(j.contains("value") ? parse_complex(j.at("value"), "map.value") : cplx{});
  }
  if (kind == "power") {
    cplx lambda = j.contains("lambda") ? parse_complex(j.at("lambda"), "map.lambda") : cplx{1.0, 0.0};
    return holonomy::MapSpec::power(get<int>(require(j, "m"), "map.m"), lambda);
  }
  if (kind == "conj") return holonomy::MapSpec::custom([](cplx z) { return std::conj(z); }, "conj");
  bad("unknown map kind '" + kind + "'");
}

}  // namespace domlab::cli
