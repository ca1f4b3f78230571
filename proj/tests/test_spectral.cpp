#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <random>

#include "mll/snapshot.hpp"
#include "mll/spectral.hpp"
#include "oracles.hpp"

using mll::Complex;
using mll::SpectralField;
using mll::TorusGrid;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coefficients().size(); ++i) {
    m = std::max(m, std::abs(a.coefficients()[i] - b.coefficients()[i]));
  }
  return m;
}

SpectralField sample(const TorusGrid& grid, double (*fn)(double, double)) {
  const int n = grid.n();
  std::vector<double> values(grid.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) values[i * n + j] = fn(2 * kPi * i / n, 2 * kPi * j / n);
  }
  return SpectralField::from_physical(grid, values);
}

}  // namespace

TEST_CASE("grid layout") {
  const TorusGrid g(2, 16);
  CHECK(g.size() == 256);
  CHECK(g.wavenumber(0) == 0);
  CHECK(g.wavenumber(8) == 8);
  CHECK(g.wavenumber(9) == -7);
  CHECK(g.dealias_cutoff() == 5);
  const int k[] = {-3, 2};
  const auto idx = g.index_of(k);
  CHECK(g.wavevector(idx)[0] == -3);
  CHECK(g.wavevector(idx)[1] == 2);
  const auto mk = g.wavevector(g.mirror(idx));
  CHECK(mk[0] == 3);
  CHECK(mk[1] == -2);
  CHECK_THROWS_AS(TorusGrid(4, 16), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(2, 12), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(2, 4), std::invalid_argument);
}

TEST_CASE("physical sampling and spectral coefficients agree") {
  const TorusGrid g(2, 16);
  const auto f = sample(g, [](double x, double y) { return std::cos(x) + 0.5 * std::sin(2 * y) + 0.25; });
  const int k1[] = {1, 0};
  const int km1[] = {-1, 0};
  const int k2[] = {0, 2};
  CHECK(std::abs(f.coefficient(k1) - Complex(0.5, 0)) < 1e-14);
  CHECK(std::abs(f.coefficient(km1) - Complex(0.5, 0)) < 1e-14);
  CHECK(std::abs(f.coefficient(k2) - Complex(0, -0.25)) < 1e-14);
  CHECK(std::abs(f.mean() - 0.25) < 1e-14);
  const auto back = f.to_physical();
  const auto again = SpectralField::from_physical(g, back);
  CHECK(max_abs_diff(f, again) < 1e-14);
}

TEST_CASE("derivatives of a trigonometric field") {
  const TorusGrid g(2, 32);
  const auto f = sample(g, [](double x, double y) { return std::sin(x) * std::cos(2 * y); });
  const auto fx = sample(g, [](double x, double y) { return std::cos(x) * std::cos(2 * y); });
  const auto fyy = sample(g, [](double x, double y) { return -4 * std::sin(x) * std::cos(2 * y); });
  CHECK(max_abs_diff(mll::derivative(f, {1, 0}), fx) < 1e-13);
  CHECK(max_abs_diff(mll::derivative(f, {0, 2}), fyy) < 1e-13);
  const auto grad = mll::gradient(f);
  CHECK(max_abs_diff(grad[0], fx) < 1e-13);
  const auto w = mll::curl(grad);
  REQUIRE(w.size() == 1);
  CHECK(mll::l2_norm(w[0]) < 1e-12);
}

TEST_CASE("Parseval against grid quadrature") {
  std::mt19937_64 rng(1);
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, dim == 2 ? 32 : 8);
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = gen::field(rng, g);
      const double a = mll::l2_norm(f);
      CHECK(std::abs(a - mll::physical_l2_norm(f)) <= 1e-12 * a);
    }
  }
}

TEST_CASE("Hermitian symmetry") {
  std::mt19937_64 rng(2);
  const TorusGrid g(2, 16);
  std::vector<Complex> c(g.size());
  std::normal_distribution<double> normal;
  for (auto& x : c) x = Complex(normal(rng), normal(rng));
  const SpectralField raw(g, c);
  CHECK(mll::hermitian_defect(raw) > 0.1);
  const auto real = mll::enforce_hermitian(raw);
  CHECK(mll::hermitian_defect(real) < 1e-15);
  for (const auto& z : real.to_physical_complex()) CHECK(std::abs(z.imag()) < 1e-12);
}

TEST_CASE("the acoustic operator is skew-adjoint") {
  std::mt19937_64 rng(3);
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, dim == 2 ? 32 : 8);
    for (int trial = 0; trial < 10; ++trial) {
      const auto u = gen::state(rng, g);
      const double n2 = std::pow(mll::l2_norm(u), 2);
      CHECK(std::abs(mll::inner_product(mll::apply_L(u), u)) <= 1e-12 * n2);
    }
  }
}

TEST_CASE("Leray projection") {
  std::mt19937_64 rng(4);
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, dim == 2 ? 32 : 8);
    for (int trial = 0; trial < 10; ++trial) {
      auto v = gen::vector_field(rng, g);
      v = (1.0 / mll::l2_norm(v)) * v;
      const auto pv = mll::leray_project(v);
      const auto ppv = mll::leray_project(pv);
      CHECK(mll::l2_norm(mll::divergence(pv)) < 1e-13 * g.n());
      CHECK(mll::l2_norm(ppv - pv) < 1e-13);
      for (int a = 0; a < dim; ++a) CHECK(std::abs(pv[a].mean() - v[a].mean()) == 0.0);
      // Gradients are annihilated.
      const auto grad = mll::gradient(gen::field(rng, g));
      CHECK(mll::l2_norm(mll::leray_project(grad)) < 1e-12 * mll::l2_norm(grad));
    }
  }
}

TEST_CASE("dealiased product") {
  const TorusGrid g(2, 32);
  const auto a = sample(g, [](double x, double) { return std::cos(3 * x); });
  const auto b = sample(g, [](double, double y) { return std::cos(4 * y); });
  const auto ab = sample(g, [](double x, double y) { return std::cos(3 * x) * std::cos(4 * y); });
  CHECK(max_abs_diff(mll::multiply_dealiased(a, b), ab) < 1e-14);
  // cos(6x)^2 has a k = 12 mode, above the 32/3 cutoff.
  const auto c = sample(g, [](double x, double) { return std::cos(6 * x); });
  const auto cc = mll::multiply_dealiased(c, c);
  const int k12[] = {12, 0};
  CHECK(std::abs(cc.coefficient(k12)) == 0.0);
  CHECK(std::abs(cc.mean() - 0.5) < 1e-14);
  const TorusGrid other(2, 16);
  CHECK_THROWS_AS(mll::multiply_dealiased(a, SpectralField(other)), std::invalid_argument);
}

TEST_CASE("snapshot round trip") {
  std::mt19937_64 rng(5);
  const TorusGrid g(2, 16);
  const auto u = gen::state(rng, g);
  const auto snap = mll::snapshot_of(u);
  REQUIRE(snap.fields.size() == 3);
  CHECK(snap.fields[0].name == "p");
  CHECK(snap.fields[2].name == "v2");
  const auto bytes = mll::encode_snapshot(snap);
  CHECK(bytes.size() == 4 + 4 * 4 + 3 * 4 + 5 + 3 * 256 * 16);
  CHECK(bytes[0] == 'M');
  const auto back = mll::decode_snapshot(bytes);
  const auto u2 = mll::state_from_snapshot(back);
  CHECK(max_abs_diff(u.p, u2.p) == 0.0);
  CHECK(max_abs_diff(u.v[1], u2.v[1]) == 0.0);

  const auto path = std::filesystem::temp_directory_path() / "mll_snapshot_test.mlsf";
  mll::write_snapshot(path, snap);
  CHECK(max_abs_diff(mll::read_snapshot(path).field("v1"), u.v[0]) == 0.0);
  std::filesystem::remove(path);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(mll::decode_snapshot(truncated), mll::SnapshotError);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(mll::decode_snapshot(bad_magic), mll::SnapshotError);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(mll::decode_snapshot(trailing), mll::SnapshotError);
}

TEST_CASE("snapshot stores wavenumbers in ascending order") {
  const TorusGrid g(2, 8);
  const int k[] = {-3, 4};
  const auto f = SpectralField::mode(g, k, Complex(2.0, -1.0));
  const auto bytes = mll::encode_snapshot({g, {{"f", f}}});
  // Row (-3) is the first row, column 4 the last column.
  const std::size_t slot = 0 * 8 + 7;
  const std::size_t offset = 4 + 4 * 4 + 4 + 1 + slot * 16;
  double re = 0.0;
  double im = 0.0;
  std::memcpy(&re, bytes.data() + offset, 8);
  std::memcpy(&im, bytes.data() + offset + 8, 8);
  CHECK(re == 2.0);
  CHECK(im == -1.0);
}
