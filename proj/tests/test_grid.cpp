#include <doctest.h>

#include "sdmac/grid.hpp"

using namespace sdmac;

TEST_CASE("build_grid meshsize and interface") {
  MacGrid g = build_grid(32, {0, 1, 0, 1}, {0, 1, -1, 0});
  CHECK(g.h == doctest::Approx(1.0 / 32));
  CHECK(g.interface_y == 0.0);

  MacGrid g2 = build_grid(2, {0, 1, 1, 2}, {0, 1, 0, 1});
  CHECK(g2.h == doctest::Approx(0.5));
  CHECK(g2.interface_y == 1.0);
  CHECK(g2.h * g2.n == doctest::Approx(g2.side));
}

TEST_CASE("build_grid rejections") {
  CHECK_THROWS_AS(build_grid(1, {0, 1, 0, 1}, {0, 1, -1, 0}), std::invalid_argument);
  // mismatched widths
  CHECK_THROWS_AS(build_grid(2, {0, 1, 1, 2}, {0, 2, 0, 1}), std::invalid_argument);
  // not a square
  CHECK_THROWS_AS(build_grid(2, {0, 1, 1, 3}, {0, 1, 0, 1}), std::invalid_argument);
  // not stacked across a horizontal interface
  CHECK_THROWS_AS(build_grid(2, {0, 1, 1, 2}, {0, 1, -1, 0}), std::invalid_argument);
  // shifted sideways
  CHECK_THROWS_AS(build_grid(2, {0, 1, 1, 2}, {1, 2, 0, 1}), std::invalid_argument);
}

TEST_CASE("dof counts") {
  auto total = [](int n) {
    MacGrid g = build_grid(n, {0, 1, 0, 1}, {0, 1, -1, 0});
    return dof_layout(g).total;
  };
  CHECK(total(2) == 14);
  CHECK(total(32) == 4064);
  CHECK(total(64) == 16320);
  CHECK(total(128) == 65408);  // 4 n^2 - n
  CHECK(total(256) == 261888);

  MacGrid g = build_grid(5, {0, 1, 0, 1}, {0, 1, -1, 0});
  DofLayout d = dof_layout(g);
  CHECK(d.n_phi + d.n_u + d.n_v_gamma + d.n_v_int + d.n_p == d.total);
  CHECK(d.n_u == 20);
  CHECK(d.n_v_gamma == 5);
  CHECK(d.n_v_int == 20);
  CHECK(d.stokes_total == 2 * 25 - 5);
}

TEST_CASE("index maps round trip") {
  MacGrid g = build_grid(5, {0, 1, 0, 1}, {0, 1, -1, 0});
  DofLayout d = dof_layout(g);
  const int n = g.n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      auto ij = d.phi_inv(d.phi(i, j));
      CHECK(ij.i == i);
      CHECK(ij.j == j);
      auto pq = d.p_inv(d.p(i, j));
      CHECK(pq.i == i);
      CHECK(pq.j == j);
    }
  for (int j = 0; j < n; ++j)
    for (int i = 1; i < n; ++i) {
      auto ij = d.u_inv(d.u(i, j));
      CHECK(ij.i == i);
      CHECK(ij.j == j);
    }
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      auto ij = d.v_int_inv(d.v_int(i, j));
      CHECK(ij.i == i);
      CHECK(ij.j == j);
    }
}

TEST_CASE("interface-adjacent phi layer occupies the trailing block") {
  MacGrid g = build_grid(6, {0, 1, 0, 1}, {0, 1, -1, 0});
  DofLayout d = dof_layout(g);
  for (int i = 0; i < g.n; ++i) CHECK(d.phi(i, g.n - 1) >= d.n_phi - g.n);
  // and the u layer adjacent to the interface leads the u block
  for (int i = 1; i < g.n; ++i) CHECK(d.u(i, 0) < g.n - 1);
}

TEST_CASE("doubled-index coordinates") {
  MacGrid g = build_grid(4, {0, 1, 1, 2}, {0, 1, 0, 1});
  CHECK(g.x_at(0) == doctest::Approx(0.0));
  CHECK(g.x_at(2 * 4) == doctest::Approx(1.0));
  CHECK(g.x_at(3) == doctest::Approx(3.0 / 8));
  CHECK(g.y_stokes(0) == doctest::Approx(1.0));
  CHECK(g.y_stokes(2 * 4) == doctest::Approx(2.0));
  CHECK(g.y_darcy(0) == doctest::Approx(0.0));
  CHECK(g.y_darcy(2 * 4) == doctest::Approx(1.0));
}
