#include "wgscat/modal.hpp"

#include <cmath>
#include <stdexcept>

#include "wgscat/quadrature.hpp"

namespace wgscat::modal {
namespace {

const Complex kI(0.0, 1.0);

// transverse wavenumber of mode m
double transverse_q(const PortSpec& spec, int m) {
  int n = (spec.bc == BcKind::Dirichlet) ? m : m - 1;
  return n * M_PI / spec.width;
}

}  // namespace

void PortSpec::validate() const {
  if (!(width > 0.0)) throw std::invalid_argument("port width must be positive");
  if (!(k > 0.0)) throw std::invalid_argument("wavenumber must be positive");
  if (bc == BcKind::Dirichlet && k * width <= M_PI)
    throw std::invalid_argument("Dirichlet channel is below cutoff (kd <= pi)");
  if (std::abs(tangent.norm() - 1.0) > 1e-12 || std::abs(axis.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("port frame vectors must be unit length");
  if (std::abs(tangent.dot(axis)) > 1e-12)
    throw std::invalid_argument("port frame must be orthogonal");
}

Complex beta(const PortSpec& spec, int m) {
  if (m < 1) throw std::invalid_argument("mode index must be >= 1");
  double q = transverse_q(spec, m);
  double disc = (spec.k - q) * (spec.k + q);
  Complex b = (disc >= 0.0) ? Complex(std::sqrt(disc), 0.0)
                            : Complex(0.0, std::sqrt(-disc));
  if (std::abs(b) < 1e-12 * spec.k)
    throw std::runtime_error("mode at cutoff: |beta| < 1e-12 k");
  return b;
}

double basis_eval(const PortSpec& spec, int m, double y) {
  if (m < 1) throw std::invalid_argument("mode index must be >= 1");
  double d = spec.width;
  if (std::abs(y) > d / 2 + 1e-12 * d)
    throw std::invalid_argument("transverse coordinate outside [-d/2, d/2]");
  if (spec.bc == BcKind::Dirichlet)
    return std::sqrt(2.0 / d) * std::sin(m * M_PI * (y + d / 2) / d);
  double amp = (m == 1) ? std::sqrt(1.0 / d) : std::sqrt(2.0 / d);
  return amp * std::cos((m - 1) * M_PI * (y + d / 2) / d);
}

int count_propagating(const PortSpec& spec) {
  int n = 0;
  for (int m = 1;; ++m) {
    double q = transverse_q(spec, m);
    if (q >= spec.k) break;
    n = m;
  }
  return n;
}

int select_mode_count(const PortSpec& spec, double L, double eps, int cap) {
  if (!(L > 0.0)) throw std::invalid_argument("channel half-length must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must be in (0,1)");
  int count = count_propagating(spec);
  if (count > cap) throw std::runtime_error("retained mode count exceeds cap");
  for (int m = count + 1;; ++m) {
    double q = transverse_q(spec, m);
    double im = std::sqrt((q - spec.k) * (q + spec.k));
    if (im * L > -std::log(eps)) break;
    count = m;
    if (count > cap) throw std::runtime_error("retained mode count exceeds cap");
  }
  return std::max(count, 1);
}

PortRule make_port_rule(const PortSpec& spec, int mode_count) {
  int panels = std::max(4, (mode_count + 3) / 4);
  const auto& gl = quadrature::gauss_legendre(16);
  double d = spec.width;
  double h = d / panels;
  PortRule rule;
  rule.y.reserve(size_t(panels) * 16);
  rule.w.reserve(size_t(panels) * 16);
  for (int p = 0; p < panels; ++p) {
    double a = -d / 2 + p * h;
    for (int j = 0; j < 16; ++j) {
      rule.y.push_back(a + h * (gl.x[j] + 1.0) / 2.0);
      rule.w.push_back(gl.w[j] * h / 2.0);
    }
  }
  return rule;
}

TraceProjection project_trace(const PortSpec& spec, const std::vector<double>& y,
                              const std::vector<double>& w,
                              const std::vector<Complex>& u,
                              const std::vector<Complex>& dxu, int m) {
  if (y.size() != w.size() || y.size() != u.size() || y.size() != dxu.size())
    throw std::invalid_argument("trace arrays must have matching sizes");
  // need >= 8 points per transverse wavelength of mode m
  int half_waves = (spec.bc == BcKind::Dirichlet) ? m : m - 1;
  if (int(y.size()) < 4 * half_waves)
    throw std::runtime_error("transverse rule too coarse for requested mode");
  TraceProjection out;
  out.pu = 0.0;
  out.pdu = 0.0;
  for (size_t j = 0; j < y.size(); ++j) {
    double b = basis_eval(spec, m, y[j]);
    out.pu += w[j] * b * u[j];
    out.pdu += w[j] * b * dxu[j];
  }
  Complex bm = beta(spec, m);
  out.cplus = (out.pdu + kI * bm * out.pu) / (2.0 * kI * bm);
  out.cminus = (-out.pdu + kI * bm * out.pu) / (2.0 * kI * bm);
  return out;
}

double mode_parity(BcKind bc, int m) {
  int n = (bc == BcKind::Dirichlet) ? m + 1 : m - 1;
  return (n % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace wgscat::modal
