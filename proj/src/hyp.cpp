#include "domlab/hyp.hpp"

#include "domlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace domlab::hyp {

namespace {

constexpr cplx I{0.0, 1.0};

using CMat = std::array<cplx, 4>;

CMat mul(const CMat& x, const CMat& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

// Conjugates a real half-plane matrix into the SU(1,1) matrix acting on the disc.
CMat to_disc(const Mobius& m) {
  static const CMat cayley{1.0, -I, 1.0, I};
  static const CMat cayley_inv{0.5, 0.5, 0.5 * I, -0.5 * I};
  CMat real{m.a(), m.b(), m.c(), m.d()};
  return mul(cayley, mul(real, cayley_inv));
}

}  // namespace

HPoint::HPoint(cplx z) : z_(z) {
  if (!(std::norm(z) < 1.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    std::ostringstream msg;
    msg << "point " << z << " is not in the open unit disc";
    throw Error(ErrorKind::invalid_point, msg.str());
  }
}

HPoint HPoint::from_half_plane(cplx z) {
  if (!(z.imag() > 0.0)) throw Error(ErrorKind::invalid_point, "point not in the upper half plane");
  return HPoint((z - I) / (z + I));
}

cplx HPoint::to_half_plane() const { return I * (1.0 + z_) / (1.0 - z_); }

Mobius::Mobius(double a, double b, double c, double d) {
  double det = a * d - b * c;
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw Error(ErrorKind::invalid_data, "matrix does not have positive determinant");
  }
  double s = 1.0 / std::sqrt(det);
  m_ = {a * s, b * s, c * s, d * s};
  double scale = 0.0;
  for (double x : m_) scale = std::max(scale, std::abs(x));
  for (double x : m_) {
    if (std::abs(x) > 1e-12 * scale) {
      if (x < 0.0) {
        for (double& y : m_) y = -y;
      }
      break;
    }
  }
}

Mobius Mobius::inverse() const { return Mobius(m_[3], -m_[1], -m_[2], m_[0]); }

Mobius Mobius::operator*(const Mobius& r) const {
  return Mobius(m_[0] * r.m_[0] + m_[1] * r.m_[2], m_[0] * r.m_[1] + m_[1] * r.m_[3],
                m_[2] * r.m_[0] + m_[3] * r.m_[2], m_[2] * r.m_[1] + m_[3] * r.m_[3]);
}

double Mobius::distance(const Mobius& o) const {
  double plus = 0.0;
  double minus = 0.0;
  for (int k = 0; k < 4; ++k) {
    plus = std::max(plus, std::abs(m_[k] - o.m_[k]));
    minus = std::max(minus, std::abs(m_[k] + o.m_[k]));
  }
  return std::min(plus, minus);
}

bool Mobius::approx_equal(const Mobius& other, double tol) const { return distance(other) <= tol; }

double dist(const HPoint& p, const HPoint& q) {
  cplx num = p.z() - q.z();
  cplx den = 1.0 - std::conj(q.z()) * p.z();
  double ratio = std::abs(num) / std::abs(den);
  return 2.0 * std::atanh(std::min(ratio, 1.0));
}

HPoint apply(const Mobius& m, const HPoint& p) {
  CMat k = to_disc(m);
  cplx w = p.z();
  cplx out = (k[0] * w + k[1]) / (k[2] * w + k[3]);
  // Rounding can push images of points very close to the circle outward.
  double r = std::abs(out);
  if (r >= 1.0) out *= std::nextafter(1.0, 0.0) / r;
  return HPoint(out);
}

Mobius rot(double theta) {
  double c = std::cos(theta / 2.0);
  double s = std::sin(theta / 2.0);
  return Mobius(c, s, -s, c);
}

Mobius trans(double r) { return Mobius(std::exp(r / 2.0), 0.0, 0.0, std::exp(-r / 2.0)); }

Mobius b_to(const HPoint& p) {
  if (p.z() == cplx{0.0, 0.0}) return Mobius::identity();
  double angle = p.arg();
  return rot(angle) * trans(dist(HPoint::origin(), p)) * rot(-angle);
}

double angular_integral(std::span<const cplx> path) {
  double total = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (path[k] == cplx{0.0, 0.0} || std::abs(path[k]) < 1e-300) {
      throw Error(ErrorKind::singular_path, "path sample " + std::to_string(k) + " lies at the origin");
    }
    if (k == 0) continue;
    double step = std::arg(path[k] / path[k - 1]);
    if (std::abs(step) >= std::numbers::pi * (1.0 - 1e-12)) {
      throw Error(ErrorKind::undersampled_path,
                  "argument jump of pi or more between samples " + std::to_string(k - 1) + " and " +
                      std::to_string(k));
    }
    total += step;
  }
  return total;
}

double angular_integral(std::span<const HPoint> path) {
  std::vector<cplx> z;
  z.reserve(path.size());
  for (const auto& p : path) z.push_back(p.z());
  return angular_integral(std::span<const cplx>(z));
}

}  // namespace domlab::hyp
