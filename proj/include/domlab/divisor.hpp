#pragma once

// Exact arithmetic on effective divisors over abstract marked points, and the
// divisor-level decision procedures for domination between harmonic maps
// with a common Hopf differential.
//
// Throughout, f is the map with data (phi, D1) and h the map with data
// (phi, D2); "h dominates f" means f*sigma < h*sigma.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace domlab::divisor {

using PointId = std::string;

struct SurfaceSpec {
  int genus = 2;
  std::vector<PointId> points;

  /// Throws invalid_data if genus < 2 or identifiers repeat.
  static std::shared_ptr<const SurfaceSpec> make(int genus, std::vector<PointId> points);

  bool contains(const PointId& id) const;
  int canonical_degree() const { return 2 * genus - 2; }
  bool operator==(const SurfaceSpec&) const = default;
};

using SurfacePtr = std::shared_ptr<const SurfaceSpec>;

/// Effective divisor: every stored multiplicity is >= 1.
class Divisor {
 public:
  explicit Divisor(SurfacePtr surface);
  /// Throws invalid_data on multiplicities < 1 or unknown points.
  Divisor(SurfacePtr surface, const std::map<PointId, int>& entries);

  /// Builds from pointwise values, dropping zeros; negative values throw.
  static Divisor from_values(SurfacePtr surface, const std::map<PointId, int>& values);

  const SurfaceSpec& surface() const { return *surface_; }
  const SurfacePtr& surface_ptr() const { return surface_; }
  const std::map<PointId, int>& entries() const { return entries_; }

  int at(const PointId& id) const;
  bool empty() const { return entries_.empty(); }

  Divisor operator+(const Divisor& other) const;
  Divisor scaled(int factor) const;

  bool operator==(const Divisor& other) const;

 private:
  SurfacePtr surface_;
  std::map<PointId, int> entries_;
};

/// Combinatorial model of a holomorphic quadratic differential: either zero
/// or given by its zero divisor, whose degree is 4g - 4.
class QDSpec {
 public:
  static QDSpec zero(SurfacePtr surface);
  /// Throws invalid_data unless deg(zeros) = 4g - 4.
  static QDSpec with_zeros(Divisor zeros);

  bool is_zero() const { return !zeros_.has_value(); }
  /// Throws not_applicable for the zero differential.
  const Divisor& zero_divisor() const;
  const SurfaceSpec& surface() const { return *surface_; }

 private:
  explicit QDSpec(SurfacePtr surface) : surface_(std::move(surface)) {}
  SurfacePtr surface_;
  std::optional<Divisor> zeros_;
};

int deg(const Divisor& d);

/// Pointwise lhs <= rhs.
bool leq(const Divisor& lhs, const Divisor& rhs);
/// lhs <= rhs everywhere and lhs < rhs somewhere.
bool strictly_less(const Divisor& lhs, const Divisor& rhs);

/// Membership of (phi, D) in the admissible data set: deg D <= 2g-2,
/// D <= (phi) when phi != 0, and phi != 0 when deg D = 2g-2.
bool in_script_D(const QDSpec& phi, const Divisor& d);

/// Euler number 2g - 2 - deg D; throws out_of_range when deg D > 2g - 2.
int euler_number(const SurfaceSpec& surface, const Divisor& d);

/// Branched-immersion criterion: 2D < (phi) or (phi) < 2D; always true for
/// phi = 0. Throws invalid_data if (phi, D) is not admissible.
bool is_branched_immersion(const QDSpec& phi, const Divisor& d);

struct ThmCVerdict {
  bool d2_less_d1 = false;
  bool sum_less_phi = false;  // vacuous (true) for phi = 0
  bool dominates = false;
};

/// Domination of f (data D1) by a branched immersion h (data D2).
/// Preconditions are checked and reported as precondition errors whose
/// clause names the failing condition.
ThmCVerdict evaluate_thm_c(const QDSpec& phi, const Divisor& d1, const Divisor& d2);
bool dominates_thm_c(const QDSpec& phi, const Divisor& d1, const Divisor& d2);

/// Domination when f (data D1) is itself a branched immersion: holds iff
/// D2 < D1.
bool dominates_cor_c(const QDSpec& phi, const Divisor& d1, const Divisor& d2);

/// (phi) - D, the data of the same map after an outer automorphism.
Divisor flip(const QDSpec& phi, const Divisor& d);

/// dominates_thm_c for data whose degrees may exceed 2g-2: each divisor of
/// degree above 2g-2 is first replaced by its flip. Requires phi != 0 and
/// D1, D2 <= (phi).
bool dominates_thm_c_flipped(const QDSpec& phi, const Divisor& d1, const Divisor& d2);

/// All effective D2 <= D1 with deg D2 = deg D1 - k, ordered by descending
/// multiplicity along the surface's point list. Throws out_of_range unless
/// 1 <= k <= deg D1.
std::vector<Divisor> enumerate_theorem_a(const Divisor& d1, int k);

struct CounterexampleWitness {
  PointId p;  // 2 D1(p) < (phi)(p)
  PointId q;  // 2 D2(q) > (phi)(q)
};

/// Searches for distinct p, q with 2D1(p) < (phi)(p) and 2D2(q) > (phi)(q).
/// Requires phi != 0 and D2 < D1.
std::optional<CounterexampleWitness> counterexample_witness(const QDSpec& phi, const Divisor& d1,
                                                            const Divisor& d2);
bool counterexample_hypothesis(const QDSpec& phi, const Divisor& d1, const Divisor& d2);

}  // namespace domlab::divisor
