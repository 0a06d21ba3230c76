#include "domlab/divisor.hpp"

#include "domlab/error.hpp"

#include <set>

namespace domlab::divisor {

namespace {

void require_same_surface(const SurfaceSpec& a, const SurfaceSpec& b) {
  if (!(a == b)) throw Error(ErrorKind::mismatched_surface, "divisors live on different surfaces");
}

void require_same_surface(const QDSpec& phi, const Divisor& d) {
  require_same_surface(phi.surface(), d.surface());
}

// Shared precondition checks for the thm_c / cor_c predicates.
void check_pair_preconditions(const QDSpec& phi, const Divisor& d1, const Divisor& d2) {
  require_same_surface(phi, d1);
  require_same_surface(phi, d2);
  int bound = phi.surface().canonical_degree();
  if (deg(d1) > bound) throw Error(ErrorKind::precondition, "deg D1 exceeds 2g-2", "deg_D1");
  if (deg(d2) > bound) throw Error(ErrorKind::precondition, "deg D2 exceeds 2g-2", "deg_D2");
  if (!in_script_D(phi, d1)) throw Error(ErrorKind::precondition, "(phi, D1) is not admissible", "D1_admissible");
  if (!in_script_D(phi, d2)) throw Error(ErrorKind::precondition, "(phi, D2) is not admissible", "D2_admissible");
}

}  // namespace

std::shared_ptr<const SurfaceSpec> SurfaceSpec::make(int genus, std::vector<PointId> points) {
  if (genus < 2) throw Error(ErrorKind::invalid_data, "genus must be at least 2");
  std::set<PointId> seen;
  for (const auto& p : points) {
    if (!seen.insert(p).second) throw Error(ErrorKind::invalid_data, "duplicate point identifier '" + p + "'");
  }
  return std::make_shared<const SurfaceSpec>(SurfaceSpec{genus, std::move(points)});
}

bool SurfaceSpec::contains(const PointId& id) const {
  for (const auto& p : points) {
    if (p == id) return true;
  }
  return false;
}

Divisor::Divisor(SurfacePtr surface) : surface_(std::move(surface)) {
  if (!surface_) throw Error(ErrorKind::invalid_data, "divisor needs a surface");
}

Divisor::Divisor(SurfacePtr surface, const std::map<PointId, int>& entries) : Divisor(std::move(surface)) {
  for (const auto& [id, m] : entries) {
    if (m < 1) throw Error(ErrorKind::invalid_data, "multiplicity at '" + id + "' must be at least 1");
    if (!surface_->contains(id)) throw Error(ErrorKind::invalid_data, "point '" + id + "' is not on the surface");
  }
  entries_ = entries;
}

Divisor Divisor::from_values(SurfacePtr surface, const std::map<PointId, int>& values) {
  std::map<PointId, int> kept;
  for (const auto& [id, m] : values) {
    if (m < 0) throw Error(ErrorKind::invalid_data, "negative multiplicity at '" + id + "'");
    if (m > 0) kept.emplace(id, m);
  }
  return Divisor(std::move(surface), kept);
}

int Divisor::at(const PointId& id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? 0 : it->second;
}

Divisor Divisor::operator+(const Divisor& other) const {
  require_same_surface(*surface_, other.surface());
  auto sum = entries_;
  for (const auto& [id, m] : other.entries_) sum[id] += m;
  return Divisor(surface_, sum);
}

Divisor Divisor::scaled(int factor) const {
  if (factor < 0) throw Error(ErrorKind::invalid_data, "negative scale factor");
  std::map<PointId, int> out;
  for (const auto& [id, m] : entries_) out[id] = m * factor;
  return from_values(surface_, out);
}

bool Divisor::operator==(const Divisor& other) const {
  return *surface_ == other.surface() && entries_ == other.entries_;
}

QDSpec QDSpec::zero(SurfacePtr surface) { return QDSpec(std::move(surface)); }

QDSpec QDSpec::with_zeros(Divisor zeros) {
  int expected = 4 * zeros.surface().genus - 4;
  if (deg(zeros) != expected) {
    throw Error(ErrorKind::invalid_data,
                "zero divisor of a quadratic differential must have degree " + std::to_string(expected));
  }
  QDSpec q(zeros.surface_ptr());
  q.zeros_ = std::move(zeros);
  return q;
}

const Divisor& QDSpec::zero_divisor() const {
  if (!zeros_) throw Error(ErrorKind::not_applicable, "the zero differential has no zero divisor");
  return *zeros_;
}

int deg(const Divisor& d) {
  int total = 0;
  for (const auto& [id, m] : d.entries()) total += m;
  return total;
}

bool leq(const Divisor& lhs, const Divisor& rhs) {
  require_same_surface(lhs.surface(), rhs.surface());
  for (const auto& [id, m] : lhs.entries()) {
    if (m > rhs.at(id)) return false;
  }
  return true;
}

bool strictly_less(const Divisor& lhs, const Divisor& rhs) { return leq(lhs, rhs) && !(lhs == rhs); }

bool in_script_D(const QDSpec& phi, const Divisor& d) {
  require_same_surface(phi, d);
  int bound = phi.surface().canonical_degree();
  int n = deg(d);
  if (n > bound) return false;
  if (phi.is_zero()) return n != bound;
  return leq(d, phi.zero_divisor());
}

int euler_number(const SurfaceSpec& surface, const Divisor& d) {
  require_same_surface(surface, d.surface());
  int n = deg(d);
  if (n > surface.canonical_degree()) {
    throw Error(ErrorKind::out_of_range, "deg D = " + std::to_string(n) + " exceeds 2g-2");
  }
  return surface.canonical_degree() - n;
}

bool is_branched_immersion(const QDSpec& phi, const Divisor& d) {
  if (!in_script_D(phi, d)) throw Error(ErrorKind::invalid_data, "(phi, D) is not admissible");
  if (phi.is_zero()) return true;
  Divisor twice = d.scaled(2);
  const Divisor& zeros = phi.zero_divisor();
  return strictly_less(twice, zeros) || strictly_less(zeros, twice);
}

ThmCVerdict evaluate_thm_c(const QDSpec& phi, const Divisor& d1, const Divisor& d2) {
  check_pair_preconditions(phi, d1, d2);
  if (!is_branched_immersion(phi, d2)) {
    throw Error(ErrorKind::precondition, "h (data D2) is not a branched immersion", "h_branched_immersion");
  }
  ThmCVerdict v;
  v.d2_less_d1 = strictly_less(d2, d1);
  v.sum_less_phi = phi.is_zero() || strictly_less(d1 + d2, phi.zero_divisor());
  v.dominates = v.d2_less_d1 && v.sum_less_phi;
  return v;
}

bool dominates_thm_c(const QDSpec& phi, const Divisor& d1, const Divisor& d2) {
  return evaluate_thm_c(phi, d1, d2).dominates;
}

bool dominates_cor_c(const QDSpec& phi, const Divisor& d1, const Divisor& d2) {
  check_pair_preconditions(phi, d1, d2);
  if (!is_branched_immersion(phi, d1)) {
    throw Error(ErrorKind::precondition, "f (data D1) is not a branched immersion", "f_branched_immersion");
  }
  return strictly_less(d2, d1);
}

Divisor flip(const QDSpec& phi, const Divisor& d) {
  require_same_surface(phi, d);
  if (phi.is_zero()) throw Error(ErrorKind::precondition, "flip needs a nonzero differential", "phi_nonzero");
  const Divisor& zeros = phi.zero_divisor();
  if (!leq(d, zeros)) throw Error(ErrorKind::precondition, "D is not dominated by (phi)", "D_leq_phi");
  std::map<PointId, int> diff;
  for (const auto& [id, m] : zeros.entries()) diff[id] = m - d.at(id);
  return Divisor::from_values(d.surface_ptr(), diff);
}

bool dominates_thm_c_flipped(const QDSpec& phi, const Divisor& d1, const Divisor& d2) {
  int bound = phi.surface().canonical_degree();
  Divisor a = deg(d1) > bound ? flip(phi, d1) : d1;
  Divisor b = deg(d2) > bound ? flip(phi, d2) : d2;
  return dominates_thm_c(phi, a, b);
}

std::vector<Divisor> enumerate_theorem_a(const Divisor& d1, int k) {
  int total = deg(d1);
  if (k < 1 || k > total) {
    throw Error(ErrorKind::out_of_range, "k must lie in [1, deg D1] = [1, " + std::to_string(total) + "]");
  }
  int target = total - k;
  // Support of D1 in surface order; each point takes a value in [0, D1(p)].
  std::vector<std::pair<PointId, int>> support;
  for (const auto& id : d1.surface().points) {
    if (int m = d1.at(id); m > 0) support.emplace_back(id, m);
  }
  std::vector<Divisor> out;
  std::map<PointId, int> current;
  auto recurse = [&](auto&& self, std::size_t idx, int remaining) -> void {
    if (idx == support.size()) {
      if (remaining == 0) out.push_back(Divisor::from_values(d1.surface_ptr(), current));
      return;
    }
    const auto& [id, cap] = support[idx];
    for (int m = std::min(cap, remaining); m >= 0; --m) {
      current[id] = m;
      self(self, idx + 1, remaining - m);
    }
    current.erase(id);
  };
  recurse(recurse, 0, target);
  return out;
}

std::optional<CounterexampleWitness> counterexample_witness(const QDSpec& phi, const Divisor& d1,
                                                            const Divisor& d2) {
  require_same_surface(phi, d1);
  require_same_surface(phi, d2);
  if (phi.is_zero()) throw Error(ErrorKind::precondition, "needs a nonzero differential", "phi_nonzero");
  if (!strictly_less(d2, d1)) throw Error(ErrorKind::precondition, "needs D2 < D1", "D2_less_D1");
  const Divisor& zeros = phi.zero_divisor();
  const auto& points = phi.surface().points;
  for (const auto& p : points) {
    if (!(2 * d1.at(p) < zeros.at(p))) continue;
    for (const auto& q : points) {
      if (q != p && 2 * d2.at(q) > zeros.at(q)) return CounterexampleWitness{p, q};
    }
  }
  return std::nullopt;
}

bool counterexample_hypothesis(const QDSpec& phi, const Divisor& d1, const Divisor& d2) {
  return counterexample_witness(phi, d1, d2).has_value();
}

}  // namespace domlab::divisor
