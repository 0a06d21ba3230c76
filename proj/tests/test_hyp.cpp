#include "doctest.h"

#include "domlab/error.hpp"
#include "domlab/hyp.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace domlab;
using namespace domlab::hyp;

namespace {

constexpr double kPi = std::numbers::pi;

// Half-plane distance formula, independent of the disc implementation.
double half_plane_dist(const HPoint& p, const HPoint& q) {
  cplx z = p.to_half_plane();
  cplx w = q.to_half_plane();
  return std::acosh(1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag()));
}

HPoint random_point(std::mt19937_64& rng, double rmax = 0.9) {
  std::uniform_real_distribution<double> r(0.0, rmax);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  return HPoint(std::polar(r(rng), a(rng)));
}

Mobius random_mobius(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(-kPi, kPi);
  std::uniform_real_distribution<double> len(0.0, 2.0);
  return rot(a(rng)) * trans(len(rng)) * rot(a(rng));
}

std::vector<cplx> circle(double r, double turns, int samples, cplx center = {}) {
  std::vector<cplx> out;
  for (int k = 0; k <= samples; ++k) out.push_back(center + std::polar(r, 2.0 * kPi * turns * k / samples));
  return out;
}

}  // namespace

TEST_CASE("points must lie in the open disc") {
  CHECK_NOTHROW(HPoint(cplx(0.3, 0.4)));
  CHECK_THROWS_AS(HPoint(cplx(1.0, 0.0)), Error);
  CHECK_THROWS_AS(HPoint(cplx(0.8, 0.8)), Error);
  try {
    HPoint(cplx(2.0, 0.0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_point);
  }
}

TEST_CASE("i corresponds to the origin") {
  CHECK(std::abs(HPoint::from_half_plane({0.0, 1.0}).z()) < 1e-15);
  HPoint p(cplx(0.2, -0.5));
  CHECK(std::abs(HPoint::from_half_plane(p.to_half_plane()).z() - p.z()) < 1e-14);
}

TEST_CASE("distance examples") {
  CHECK(dist(HPoint(), HPoint()) == 0.0);
  CHECK(dist(HPoint(), HPoint(cplx(std::tanh(0.5), 0.0))) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("distance agrees with the half-plane formula and is isometry invariant") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    HPoint p = random_point(rng);
    HPoint q = random_point(rng);
    HPoint s = random_point(rng);
    Mobius m = random_mobius(rng);
    CHECK(dist(p, q) == doctest::Approx(half_plane_dist(p, q)).epsilon(1e-10));
    CHECK(std::abs(dist(apply(m, p), apply(m, q)) - dist(p, q)) < 1e-10);
    CHECK(dist(p, q) == doctest::Approx(dist(q, p)).epsilon(1e-14));
    CHECK(dist(p, s) <= dist(p, q) + dist(q, s) + 1e-12);
  }
}

TEST_CASE("Mobius normalization") {
  Mobius m(2.0, 1.0, 1.0, 1.0);
  CHECK(m.det() == doctest::Approx(1.0).epsilon(1e-14));
  Mobius neg(-1.0, 0.0, 0.0, -1.0);
  CHECK(neg.a() == 1.0);
  CHECK(neg.d() == 1.0);
  Mobius lead_zero(0.0, -1.0, 1.0, 0.0);
  CHECK(lead_zero.b() == 1.0);
  CHECK(lead_zero.c() == -1.0);
  CHECK_THROWS_AS(Mobius(1.0, 2.0, 2.0, 1.0), Error);
}

TEST_CASE("rot and trans") {
  CHECK(rot(0.0).approx_equal(Mobius::identity()));
  CHECK(rot(2.0 * kPi).approx_equal(Mobius::identity()));
  CHECK((trans(1.0) * trans(-1.0)).approx_equal(Mobius::identity()));
  CHECK((trans(0.7) * trans(0.4)).approx_equal(trans(1.1)));
  CHECK(std::abs(apply(rot(1.3), HPoint()).z()) < 1e-15);
  cplx x(0.3, 0.2);
  CHECK(std::abs(apply(rot(1.3), HPoint(x)).z() - x * std::polar(1.0, 1.3)) < 1e-14);
  // trans(r) moves i to i e^r along the imaginary axis of the half plane.
  cplx z = apply(trans(0.8), HPoint()).to_half_plane();
  CHECK(std::abs(z - cplx(0.0, std::exp(0.8))) < 1e-12);
  CHECK(std::abs(apply(trans(0.8), HPoint()).z() - std::tanh(0.4)) < 1e-14);
}

TEST_CASE("apply respects composition and inverse") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    Mobius m = random_mobius(rng);
    Mobius n = random_mobius(rng);
    HPoint p = random_point(rng);
    CHECK(std::abs(apply(m * n, p).z() - apply(m, apply(n, p)).z()) < 1e-10);
    CHECK(std::abs(apply(m.inverse(), apply(m, p)).z() - p.z()) < 1e-10);
    CHECK((m * n).det() == doctest::Approx(1.0).epsilon(1e-12));
  }
  HPoint p(cplx(-0.4, 0.1));
  CHECK(apply(Mobius::identity(), p).z() == p.z());
}

TEST_CASE("b_to sends 0 to p along the axis through p") {
  CHECK(b_to(HPoint()).approx_equal(Mobius::identity()));
  CHECK(std::abs(apply(b_to(HPoint(cplx(0.3, 0.0))).inverse(), HPoint()).z() - cplx(-0.3, 0.0)) < 1e-14);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    HPoint p = random_point(rng, 0.95);
    CHECK(std::abs(apply(b_to(p), HPoint()).z() - p.z()) < 1e-12);
    CHECK(std::abs(apply(b_to(p).inverse(), HPoint()).z() + p.z()) < 1e-12);
    // The axis is preserved: points on the diameter through p stay on it.
    cplx on_axis = 0.5 * p.z();
    cplx image = apply(b_to(p), HPoint(on_axis)).z();
    CHECK(std::abs((image * std::conj(p.z())).imag()) < 1e-12);
  }
}

TEST_CASE("angular integral examples") {
  auto one = circle(0.5, 1.0, 512);
  CHECK(angular_integral(std::span<const cplx>(one)) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
  auto two = circle(0.5, 2.0, 512);
  CHECK(angular_integral(std::span<const cplx>(two)) == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  auto off = circle(0.2, 1.0, 512, {0.5, 0.0});
  CHECK(std::abs(angular_integral(std::span<const cplx>(off))) < 1e-12);
}

TEST_CASE("angular integral errors") {
  std::vector<cplx> hits{{0.5, 0.0}, {0.0, 0.0}, {-0.5, 0.0}};
  try {
    angular_integral(std::span<const cplx>(hits));
    FAIL("expected singular_path");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singular_path);
  }
  std::vector<cplx> jump{{0.5, 0.0}, {-0.5, 0.0}};
  try {
    angular_integral(std::span<const cplx>(jump));
    FAIL("expected undersampled_path");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undersampled_path);
  }
}

TEST_CASE("closed loops integrate to multiples of 2 pi and are rotation invariant") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    // Random smooth closed loop: a perturbed circle that may or may not enclose 0.
    cplx c(0.4 * u(rng), 0.4 * u(rng));
    double r = 0.2 + 0.2 * std::abs(u(rng));
    double wobble = 0.05 * u(rng);
    std::vector<HPoint> path;
    for (int k = 0; k <= 2048; ++k) {
      double s = 2.0 * kPi * k / 2048;
      path.emplace_back(c + std::polar(r + wobble * std::sin(3 * s), s));
    }
    path.back() = path.front();
    double w = angular_integral(std::span<const HPoint>(path));
    CHECK(std::abs(w / (2.0 * kPi) - std::round(w / (2.0 * kPi))) < 1e-9 / (2.0 * kPi));
    double theta = kPi * u(rng);
    std::vector<HPoint> rotated;
    for (const auto& p : path) rotated.push_back(apply(rot(theta), p));
    CHECK(std::abs(angular_integral(std::span<const HPoint>(rotated)) - w) < 1e-9);
  }
}

TEST_CASE("angular integral is additive under concatenation") {
  auto a = circle(0.5, 0.5, 256);
  auto b = circle(0.5, 0.5, 256);
  for (auto& z : b) z *= -1.0;
  std::vector<cplx> joined(a);
  joined.insert(joined.end(), b.begin() + 1, b.end());
  double total = angular_integral(std::span<const cplx>(a)) + angular_integral(std::span<const cplx>(b));
  CHECK(angular_integral(std::span<const cplx>(joined)) == doctest::Approx(total).epsilon(1e-13));
}
