#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "kvisim/bistatic.hpp"

using namespace kvisim;

namespace {

// Forward measurement map used as the round-trip oracle.
BistaticMeasurement measure(const Point2D& tx, const Point2D& rx, const Point2D& target,
                            BearingAnchor anchor = BearingAnchor::tx) {
  BistaticMeasurement m;
  m.tx_pos = tx;
  m.rx_pos = rx;
  m.anchor = anchor;
  const Point2D& from = (anchor == BearingAnchor::tx) ? tx : rx;
  m.bearing_rad = std::atan2(target.y - from.y, target.x - from.x);
  m.range_sum_m = distance(target, tx) + distance(target, rx);
  return m;
}

// Rejects draws whose ray runs nearly tangent to the ellipse; those amplify
// measurement rounding without bound and carry no inversion information.
bool well_conditioned(const BistaticMeasurement& m) {
  if (!(m.range_sum_m > distance(m.tx_pos, m.rx_pos) * (1.0 + 1e-6))) return false;
  const Point2D& from = (m.anchor == BearingAnchor::tx) ? m.tx_pos : m.rx_pos;
  const Point2D& other = (m.anchor == BearingAnchor::tx) ? m.rx_pos : m.tx_pos;
  const double u_dot_b = std::cos(m.bearing_rad) * (other.x - from.x) +
                         std::sin(m.bearing_rad) * (other.y - from.y);
  return m.range_sum_m - u_dot_b >= 1e-3 * m.range_sum_m;
}

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

TEST_CASE("range resolution", "[bistatic]") {
  CHECK(range_resolution_m(800e6) == Approx(0.3747405725).epsilon(1e-9));  // the 40 cm class
  CHECK(range_resolution_m(80e6) == Approx(3.747405725).epsilon(1e-9));
  CHECK(range_resolution_m(2.0 * 800e6) == Approx(0.5 * range_resolution_m(800e6)).epsilon(1e-15));
  CHECK_THROWS_AS(range_resolution_m(0.0), std::invalid_argument);
}

TEST_CASE("locate_target closed form", "[bistatic]") {
  SECTION("symmetric geometry") {
    BistaticMeasurement m;
    m.tx_pos = {0.0, 0.0};
    m.rx_pos = {10.0, 0.0};
    m.bearing_rad = M_PI / 4.0;
    m.range_sum_m = 2.0 * std::sqrt(50.0);  // 14.1421
    const Point2D p = locate_target(m);
    CHECK(p.x == Approx(5.0).epsilon(1e-9));
    CHECK(p.y == Approx(5.0).epsilon(1e-9));
  }
  SECTION("limits of the closed form as the ellipse collapses onto the baseline") {
    BistaticMeasurement m;
    m.tx_pos = {0.0, 0.0};
    m.rx_pos = {10.0, 0.0};
    const double eps = 1e-6;
    m.range_sum_m = 10.0 + eps;

    m.bearing_rad = M_PI;  // away from rx: intersection collapses onto tx
    const Point2D near_tx = locate_target(m);
    CHECK(std::abs(near_tx.x) < 1e-6);
    CHECK(std::abs(near_tx.y) < 1e-12);

    m.bearing_rad = 0.0;  // toward rx: intersection collapses onto the far focus
    const Point2D near_rx = locate_target(m);
    CHECK(near_rx.x == Approx(10.0 + eps / 2.0).epsilon(1e-9));
  }
  SECTION("degenerate ellipse is rejected") {
    BistaticMeasurement m;
    m.tx_pos = {0.0, 0.0};
    m.rx_pos = {10.0, 0.0};
    m.bearing_rad = 0.3;
    m.range_sum_m = 10.0;  // equals the baseline
    CHECK_THROWS_WITH(locate_target(m), Catch::Contains("degenerate"));
    m.range_sum_m = 9.0;
    CHECK_THROWS_AS(locate_target(m), std::domain_error);
  }
  SECTION("tangent bearing is rejected as ill-conditioned") {
    BistaticMeasurement m;
    m.tx_pos = {0.0, 0.0};
    m.rx_pos = {10.0, 0.0};
    m.bearing_rad = 0.0;
    m.range_sum_m = 10.0 + 1e-14;  // R - u.b below the conditioning floor
    CHECK_THROWS_WITH(locate_target(m), Catch::Contains("ill-conditioned"));
  }
}

TEST_CASE("round trip over random geometries", "[bistatic][oracle]") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  int tested = 0;
  while (tested < 1000) {
    const Point2D tx{pos(rng), pos(rng)};
    const Point2D rx{pos(rng), pos(rng)};
    const Point2D target{pos(rng), pos(rng)};
    const BistaticMeasurement m = measure(tx, rx, target);
    if (!well_conditioned(m)) continue;
    const Point2D p = locate_target(m);
    REQUIRE(std::abs(p.x - target.x) <= 1e-9);
    REQUIRE(std::abs(p.y - target.y) <= 1e-9);

    // the returned point satisfies both measurement constraints
    const double range_back = distance(p, tx) + distance(p, rx);
    REQUIRE(range_back == Approx(m.range_sum_m).epsilon(1e-9));
    const double bearing_back = std::atan2(p.y - tx.y, p.x - tx.x);
    REQUIRE(std::abs(wrap_angle(bearing_back - m.bearing_rad)) <= 1e-9);
    ++tested;
  }
}

TEST_CASE("rx-anchored bearing round trip", "[bistatic]") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> pos(0.0, 500.0);
  int tested = 0;
  while (tested < 200) {
    const Point2D tx{pos(rng), pos(rng)};
    const Point2D rx{pos(rng), pos(rng)};
    const Point2D target{pos(rng), pos(rng)};
    const BistaticMeasurement m = measure(tx, rx, target, BearingAnchor::rx);
    if (!well_conditioned(m)) continue;
    const Point2D p = locate_target(m);
    REQUIRE(std::abs(p.x - target.x) <= 1e-9);
    REQUIRE(std::abs(p.y - target.y) <= 1e-9);
    ++tested;
  }
}

TEST_CASE("solution is covariant under rigid motions", "[bistatic][property]") {
  std::mt19937_64 rng(161803);
  std::uniform_real_distribution<double> pos(0.0, 800.0);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  std::uniform_real_distribution<double> shift(-500.0, 500.0);
  int tested = 0;
  while (tested < 100) {
    const Point2D tx{pos(rng), pos(rng)};
    const Point2D rx{pos(rng), pos(rng)};
    const Point2D target{pos(rng), pos(rng)};
    const BistaticMeasurement m = measure(tx, rx, target);
    if (!well_conditioned(m)) continue;

    const double phi = angle(rng);
    const double ox = shift(rng), oy = shift(rng);
    const auto transform = [&](const Point2D& p) {
      return Point2D{std::cos(phi) * p.x - std::sin(phi) * p.y + ox,
                     std::sin(phi) * p.x + std::cos(phi) * p.y + oy};
    };
    BistaticMeasurement moved = m;
    moved.tx_pos = transform(m.tx_pos);
    moved.rx_pos = transform(m.rx_pos);
    moved.bearing_rad = m.bearing_rad + phi;

    const Point2D direct = transform(locate_target(m));
    const Point2D via_moved = locate_target(moved);
    REQUIRE(std::abs(direct.x - via_moved.x) <= 1e-7);
    REQUIRE(std::abs(direct.y - via_moved.y) <= 1e-7);
    ++tested;
  }
}

TEST_CASE("quantized locate", "[bistatic]") {
  BistaticMeasurement m;
  m.tx_pos = {0.0, 0.0};
  m.rx_pos = {100.0, 0.0};
  m.bearing_rad = 1.1;
  m.range_sum_m = 250.0;

  SECTION("vanishing resolution recovers the exact solution") {
    const Point2D exact = locate_target(m);
    const Point2D q = quantized_locate(m, 1e-9);
    CHECK(q.x == Approx(exact.x).margin(1e-6));
    CHECK(q.y == Approx(exact.y).margin(1e-6));
  }
  SECTION("an exact-multiple range sum is a fixed point of the rounding") {
    BistaticMeasurement fixed = m;
    fixed.range_sum_m = 1000.0 * 0.25;
    const Point2D exact = locate_target(fixed);
    const Point2D q = quantized_locate(fixed, 0.25);
    CHECK(q.x == exact.x);
    CHECK(q.y == exact.y);
  }
  SECTION("delay-bin quantization error stays within 2 bins over the test set") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> posx(0.0, 1000.0);
    std::uniform_real_distribution<double> posy(100.0, 1000.0);  // keep away from the baseline
    const double res = 0.3747405725;
    int tested = 0;
    while (tested < 500) {
      const Point2D tx{posx(rng), 0.0};
      const Point2D rx{posx(rng), 0.0};
      const Point2D target{posx(rng), posy(rng)};
      const BistaticMeasurement meas = measure(tx, rx, target);
      if (!(meas.range_sum_m > distance(tx, rx) + 1.0)) continue;
      const Point2D exact = locate_target(meas);
      const Point2D q = quantized_locate(meas, res);
      const double err = distance(exact, q);
      REQUIRE(err <= 2.0 * res);
      ++tested;
    }
  }
  SECTION("invalid resolution") {
    CHECK_THROWS_AS(quantized_locate(m, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(quantized_locate(m, -1.0), std::invalid_argument);
  }
}
