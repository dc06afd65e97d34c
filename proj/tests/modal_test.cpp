#include <cmath>
#include <complex>

#include "doctest.h"
#include "wgscat/modal.hpp"

using namespace wgscat::modal;

namespace {

PortSpec dirichlet_port(double d = M_PI + 1.0, double k = 1.0) {
  PortSpec s;
  s.width = d;
  s.k = k;
  s.bc = BcKind::Dirichlet;
  return s;
}

PortSpec neumann_port(double d, double k) {
  PortSpec s;
  s.width = d;
  s.k = k;
  s.bc = BcKind::Neumann;
  return s;
}

}  // namespace

TEST_CASE("propagation constants: branch and pinned values") {
  PortSpec s = dirichlet_port();
  // 40-digit references for d = pi + 1, k = 1
  CHECK(beta(s, 1).real() == doctest::Approx(0.651618338767858059).epsilon(1e-14));
  CHECK(beta(s, 1).imag() == 0.0);
  CHECK(beta(s, 2).real() == 0.0);
  CHECK(beta(s, 2).imag() == doctest::Approx(1.14086553209642892).epsilon(1e-14));
  for (int m = 1; m < 40; ++m) {
    auto b = beta(s, m);
    CHECK(b.imag() >= 0.0);
    CHECK(b.real() >= 0.0);
    // beta^2 + q^2 = k^2
    double q = m * M_PI / s.width;
    CHECK(std::abs(b * b + q * q - s.k * s.k) < 1e-12);
  }
}

TEST_CASE("cutoff guard") {
  PortSpec s = dirichlet_port(M_PI, 1.0);
  // kd = pi exactly: mode 1 sits at cutoff
  CHECK_THROWS(beta(s, 1));
}

TEST_CASE("propagating mode counts") {
  CHECK(count_propagating(dirichlet_port(M_PI + 1.0, 1.0)) == 1);
  CHECK(count_propagating(dirichlet_port(2.0, 7.0)) == 4);   // m pi/2 < 7
  CHECK(count_propagating(neumann_port(2.0, 2.5)) == 2);     // (m-1) pi/2 < 2.5
  CHECK(count_propagating(neumann_port(2.0, 0.1)) == 1);     // constant mode only
}

TEST_CASE("retained mode selection") {
  PortSpec s = dirichlet_port();
  CHECK(select_mode_count(s, 7.5, 1e-14) == 5);
  // monotone in L and in eps
  int prev = 0;
  for (double L : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    int c = select_mode_count(s, L, 1e-14);
    CHECK((c <= prev || prev == 0));
    prev = c;
  }
  CHECK(select_mode_count(s, 1.0, 1e-14) >= select_mode_count(s, 1.0, 1e-6));
  CHECK(select_mode_count(s, 1.0, 1e-14) >= count_propagating(s));
  CHECK_THROWS(select_mode_count(s, 1e-9, 1e-14, 512));  // cap exceeded
}

TEST_CASE("basis orthonormality under the port rule") {
  for (auto bc : {BcKind::Dirichlet, BcKind::Neumann}) {
    PortSpec s = (bc == BcKind::Dirichlet) ? dirichlet_port(2.7, 2.0)
                                           : neumann_port(2.7, 2.0);
    int M = 12;
    PortRule r = make_port_rule(s, M);
    for (int m = 1; m <= M; ++m)
      for (int n = m; n <= M; ++n) {
        double g = 0.0;
        for (size_t j = 0; j < r.y.size(); ++j)
          g += r.w[j] * basis_eval(s, m, r.y[j]) * basis_eval(s, n, r.y[j]);
        CHECK(std::abs(g - (m == n ? 1.0 : 0.0)) < 1e-12);
      }
  }
}

TEST_CASE("projection round trip on a synthetic two-mode trace") {
  PortSpec s = dirichlet_port(2.0, 7.0);
  const std::complex<double> iu(0.0, 1.0);
  std::complex<double> a1(0.7, -0.2), b1(0.1, 0.4);   // mode 1 in/out
  std::complex<double> a3(-0.3, 0.9), b3(0.05, 0.0);  // mode 3
  auto b_1 = beta(s, 1);
  auto b_3 = beta(s, 3);
  PortRule r = make_port_rule(s, 8);
  std::vector<std::complex<double>> u(r.y.size()), du(r.y.size());
  for (size_t j = 0; j < r.y.size(); ++j) {
    // trace at x = 0 of a1 e^{ibx} + b1 e^{-ibx} per mode
    u[j] = (a1 + b1) * basis_eval(s, 1, r.y[j]) + (a3 + b3) * basis_eval(s, 3, r.y[j]);
    du[j] = iu * b_1 * (a1 - b1) * basis_eval(s, 1, r.y[j]) +
            iu * b_3 * (a3 - b3) * basis_eval(s, 3, r.y[j]);
  }
  auto p1 = project_trace(s, r.y, r.w, u, du, 1);
  auto p3 = project_trace(s, r.y, r.w, u, du, 3);
  auto p2 = project_trace(s, r.y, r.w, u, du, 2);
  CHECK(std::abs(p1.cplus - a1) < 1e-12);
  CHECK(std::abs(p1.cminus - b1) < 1e-12);
  CHECK(std::abs(p3.cplus - a3) < 1e-12);
  CHECK(std::abs(p3.cminus - b3) < 1e-12);
  CHECK(std::abs(p2.cplus) < 1e-12);
  CHECK(std::abs(p2.cminus) < 1e-12);
}

TEST_CASE("projection rejects under-resolved rules") {
  PortSpec s = dirichlet_port(2.0, 60.0);
  PortRule r = make_port_rule(s, 4);  // 64 points
  std::vector<std::complex<double>> z(r.y.size(), 0.0);
  CHECK_THROWS(project_trace(s, r.y, r.w, z, z, 17));
}

TEST_CASE("mode parity under transverse flip") {
  PortSpec sd = dirichlet_port(2.0, 7.0);
  PortSpec sn = neumann_port(2.0, 7.0);
  for (int m = 1; m <= 6; ++m) {
    for (double y : {0.13, -0.77, 0.5}) {
      CHECK(basis_eval(sd, m, -y) ==
            doctest::Approx(mode_parity(BcKind::Dirichlet, m) * basis_eval(sd, m, y))
                .epsilon(1e-13));
      CHECK(basis_eval(sn, m, -y) ==
            doctest::Approx(mode_parity(BcKind::Neumann, m) * basis_eval(sn, m, y))
                .epsilon(1e-13));
    }
  }
}

TEST_CASE("port spec validation") {
  PortSpec s = dirichlet_port(2.0, 1.0);  // kd = 2 < pi: below cutoff
  CHECK_THROWS(s.validate());
  s = dirichlet_port();
  s.tangent = {2.0, 0.0};
  CHECK_THROWS(s.validate());
  s = dirichlet_port();
  s.axis = s.tangent;
  CHECK_THROWS(s.validate());
  CHECK_NOTHROW(dirichlet_port().validate());
}
