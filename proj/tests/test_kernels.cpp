#include <doctest.h>

#include <cmath>
#include <vector>

#include "liespec/errors.hpp"
#include "liespec/isolation.hpp"
#include "liespec/kernels.hpp"
#include "liespec/rng.hpp"

using namespace liespec;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

}  // namespace

TEST_CASE("every supported lane matches the scalar reference") {
  const auto lanes = kernels::supported_lanes();
  REQUIRE(!lanes.empty());
  CHECK(lanes.front() == kernels::Lane::scalar);

  Rng rng(20240811);
  const auto& scalar = kernels::ops_for(kernels::Lane::scalar);

  for (kernels::Lane lane : lanes) {
    const auto& ops = kernels::ops_for(lane);
    INFO("lane ", kernels::lane_name(lane));

    // odd lengths exercise the SIMD remainder loops
    for (std::size_t n : {std::size_t(1), std::size_t(5), std::size_t(64), std::size_t(129)}) {
      auto x = random_vec(rng, n);
      auto y = random_vec(rng, n);
      const double a = rng.uniform(-2.0, 2.0);

      auto y_ref = y;
      scalar.axpy(y_ref.data(), x.data(), a, n);
      auto y_lane = y;
      ops.axpy(y_lane.data(), x.data(), a, n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(y_lane[i] == doctest::Approx(y_ref[i]).epsilon(1e-14));

      const double d_ref = scalar.dot(x.data(), y.data(), n);
      const double d_lane = ops.dot(x.data(), y.data(), n);
      CHECK(d_lane == doctest::Approx(d_ref).epsilon(1e-13));

      const double c = std::cos(0.7), s = std::sin(0.7);
      auto xr = x, yr = y;
      scalar.rot(xr.data(), yr.data(), c, s, n);
      auto xl = x, yl = y;
      ops.rot(xl.data(), yl.data(), c, s, n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(xl[i] == doctest::Approx(xr[i]).epsilon(1e-14));
        CHECK(yl[i] == doctest::Approx(yr[i]).epsilon(1e-14));
      }

      auto zy = random_vec(rng, 2 * n);
      auto zx = random_vec(rng, 2 * n);
      auto zy_ref = zy;
      scalar.zaxpy(zy_ref.data(), zx.data(), 0.3, -0.8, n);
      auto zy_lane = zy;
      ops.zaxpy(zy_lane.data(), zx.data(), 0.3, -0.8, n);
      for (std::size_t i = 0; i < 2 * n; ++i)
        CHECK(zy_lane[i] == doctest::Approx(zy_ref[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("plane rotation is an isometry") {
  Rng rng(7);
  for (kernels::Lane lane : kernels::supported_lanes()) {
    const auto& ops = kernels::ops_for(lane);
    auto x = random_vec(rng, 37);
    auto y = random_vec(rng, 37);
    const double before = ops.dot(x.data(), x.data(), 37) + ops.dot(y.data(), y.data(), 37);
    ops.rot(x.data(), y.data(), std::cos(1.2), std::sin(1.2), 37);
    const double after = ops.dot(x.data(), x.data(), 37) + ops.dot(y.data(), y.data(), 37);
    CHECK(after == doctest::Approx(before).epsilon(1e-12));
  }
}

TEST_CASE("lane selection is sticky and rejects unsupported names") {
  const kernels::Lane original = kernels::active_lane();
  kernels::set_lane(kernels::Lane::scalar);
  CHECK(kernels::active_lane() == kernels::Lane::scalar);
  kernels::set_lane(original);
  CHECK(kernels::active_lane() == original);
  CHECK_THROWS_AS(kernels::lane_from_name("avx512"), input_error);
}

TEST_CASE("lanes agree end to end on a seeded scan") {
  const kernels::Lane original = kernels::active_lane();
  const GroupModel su2 = GroupModel::preset("su2");
  const Metric g0 = su2.default_bi_invariant();
  ScanConfig config;
  config.radius = 0.2;
  config.samples = 40;
  config.seed = 42;

  std::vector<std::vector<double>> per_lane;
  for (kernels::Lane lane : kernels::supported_lanes()) {
    kernels::set_lane(lane);
    const ScanReport report = isolation_scan(su2, g0, config);
    std::vector<double> discrepancies;
    for (const auto& s : report.samples) discrepancies.push_back(s.discrepancy);
    per_lane.push_back(std::move(discrepancies));
  }
  kernels::set_lane(original);

  for (std::size_t l = 1; l < per_lane.size(); ++l)
    for (std::size_t i = 0; i < per_lane[0].size(); ++i)
      CHECK(per_lane[l][i] ==
            doctest::Approx(per_lane[0][i]).epsilon(1e-12));
}
