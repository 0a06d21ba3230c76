#pragma once

// JSON config decoding for the command-line front end. Every decoding error
// is raised as domlab::Error with kind invalid_input.

#include "domlab/bochner.hpp"
#include "domlab/divisor.hpp"
#include "domlab/holonomy.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace domlab::cli {

using nlohmann::json;

json load_json(const std::string& path);

cplx parse_complex(const json& j, const char* what);

struct DivisorConfig {
  divisor::SurfacePtr surface;
  divisor::QDSpec phi;
  divisor::Divisor d1;
  divisor::Divisor d2;
  std::string request;
  int k = 1;
};

/// {"genus", "points"?, "phi": {"zero", "divisor"}, "D1", "D2", "request"?, "k"?}
DivisorConfig parse_divisor_config(const json& j);
json divisor_to_json(const divisor::Divisor& d);

/// {"type": "disc", "center", "radius", "n"} or
/// {"type": "rectangle", "origin", "spacing", "nx", "ny"}.
Grid parse_grid(const json& j);
field::ConformalMetric parse_metric(const json& j);
bochner::PolyQD parse_phi(const json& j);
std::vector<bochner::DivisorPoint> parse_placed_divisor(const json& j);
bochner::BoundaryTrace parse_boundary(const json& j);

/// Map description for `field analyze`: {"kind": "constant"|"power"|"conj", ...}.
holonomy::MapSpec parse_map(const json& j);

}  // namespace domlab::cli
