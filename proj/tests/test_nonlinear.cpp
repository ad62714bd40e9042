#include "doctest.h"
#include "lklab/nonlinear.hpp"

#include <cmath>

using namespace lklab;

namespace {

ModelParams params(double eps, double lambda = 2.0) {
  ModelParams mp;
  mp.epsilon = eps;
  mp.lambda = lambda;
  return mp;
}

}  // namespace

// Reference digits below were produced with 40-digit arithmetic from the
// closed forms (1+w)^{1+e^2}-1, (1+e^2)(1+w)^{e^2}, e^2(1+e^2)(1+w)^{e^2-1},
// ((1+w)^{2+e^2}-1)/(2+e^2)-w and (1+w)((1+w)^{e^2}-1-e^2 log(1+w)).
TEST_CASE("hertz-log force stack matches high-precision references") {
  struct Row {
    double w, eps;
    double force, v2, v3, n, pot, m;
  };
  const Row rows[] = {
      {0.5, 0.1, 0.5060943234498846, 1.0141035111229223, 0.0067606900741528156,
       0.0060943234498846647, 0.12643854983822239, 1.2346828262198959e-5},
      {-0.3, 0.2, -0.30991599449746193, 1.0252676653180566, 0.058586723732460375,
       -0.0099159944974619258, 0.046597452868517967, 7.0903932822580824e-5},
      {3.0, 0.15, 3.1267327172054357, 1.0548960508356395, 0.0059337902859504721,
       0.12673271720543566, 4.6672093294545081, 0.0019662247046455042},
      {-0.45, 0.1, -0.45327829431186546, 1.0039798595363925, 0.018254179264298046,
       -0.0032782943118654608, 0.0, 0.0},
      {20.0, 0.05, 20.160447259999525, 1.0101594465785487, 1.2025707697363675e-4,
       0.16044725999952473, 0.0, 0.0},
  };
  for (const Row& r : rows) {
    CAPTURE(r.w);
    CAPTURE(r.eps);
    const ModelParams mp = params(r.eps);
    CHECK(force(r.w, mp) == doctest::Approx(r.force).epsilon(1e-15));
    CHECK(force_deriv(r.w, 2, mp) == doctest::Approx(r.v2).epsilon(1e-15));
    CHECK(force_deriv(r.w, 3, mp) == doctest::Approx(r.v3).epsilon(1e-14));
    CHECK(n_eps(r.w, mp) == doctest::Approx(r.n).epsilon(1e-13));
    if (r.pot != 0.0) CHECK(potential(r.w, mp) == doctest::Approx(r.pot).epsilon(1e-15));
    if (r.m != 0.0) CHECK(m_eps(r.w, mp) == doctest::Approx(r.m).epsilon(1e-12));
  }
}

TEST_CASE("g and v log v match references, v log v vanishes continuously") {
  CHECK(g_log(0.5) == doctest::Approx(0.60819766216224657).epsilon(1e-15));
  CHECK(g_log(0.5, 1) == doctest::Approx(1.4054651081081644).epsilon(1e-15));
  CHECK(g_log(0.5, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(g_log(-0.3) == doctest::Approx(-0.24967246075711267).epsilon(1e-15));
  CHECK(g_log(-0.3, 1) == doctest::Approx(0.64332505606126762).epsilon(1e-15));
  CHECK(g_log(5.0) == doctest::Approx(10.750556815368330).epsilon(1e-15));

  CHECK(vlogv(0.5) == doctest::Approx(-0.34657359027997265).epsilon(1e-15));
  CHECK(vlogv(2.0) == doctest::Approx(1.3862943611198906).epsilon(1e-15));
  CHECK(vlogv(1e-8) == doctest::Approx(-1.8420680743952365e-7).epsilon(1e-15));
  CHECK(vlogv(0.0) == 0.0);
  CHECK(vlogv(1e-310) == 0.0);  // subnormal inputs stay exact zeros
  CHECK_THROWS_AS(vlogv(-1e-12), std::domain_error);
}

TEST_CASE("power family evaluates the polynomial flux") {
  ModelParams mp = params(0.2);
  mp.family = ForceFamily::power;
  mp.power_p = 3;
  CHECK(force(0.7, mp) == doctest::Approx(0.71372).epsilon(1e-15));
  CHECK(potential(0.7, mp) == doctest::Approx(0.247401).epsilon(1e-15));
  CHECK(force_deriv(0.7, 2, mp) == doctest::Approx(1.0588).epsilon(1e-15));
  CHECK(force_deriv(0.7, 3, mp) == doctest::Approx(0.168).epsilon(1e-15));
  CHECK(n_eps(0.7, mp) == doctest::Approx(0.04 * 0.343).epsilon(1e-15));
  CHECK(m_eps(0.7, mp) == 0.0);
}

TEST_CASE("near-linear regime keeps digits through expm1/log1p") {
  const ModelParams mp = params(1e-4);
  // force(w) - w = (1+w) expm1(e^2 log1p(w)): for tiny w and eps the leading
  // term is e^2 w, so a naive pow-based evaluation would lose everything
  const double w = 1e-9;
  const double dev = force(w, mp) - w;
  CHECK(dev == doctest::Approx(1e-8 * 1e-9).epsilon(1e-6));
  // the subtraction rounds at the ulp of w, a few 1e-25
  CHECK(std::abs(n_eps(w, mp) - dev) <= 1e-24);
}

TEST_CASE("derived parameters follow the closed forms") {
  ModelParams mp = params(0.1, 2.0);
  CHECK(mp.mu() == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(mp.speed() == doctest::Approx(std::sqrt(1.02)).epsilon(1e-15));
  CHECK(mp.kappa() == doctest::Approx(std::sqrt(12.0)).epsilon(1e-15));
  CHECK(mp.upper_ball() == doctest::Approx(std::exp(4.0)).epsilon(1e-15));
  mp.ball_R = 7.5;
  CHECK(mp.upper_ball() == 7.5);
  mp.v0 = 4.0;
  CHECK(mp.time_scale() == doctest::Approx(std::pow(4.0, 0.005)).epsilon(1e-15));

  const ModelParams mp3 = params(0.2, 3.0);
  CHECK(mp3.kappa() == doctest::Approx(std::sqrt(24.0)).epsilon(1e-15));
  CHECK(mp3.mu() == doctest::Approx(0.12).epsilon(1e-15));
}

TEST_CASE("strain domain guard throws at and below -1") {
  const ModelParams mp = params(0.1);
  CHECK_THROWS_AS(force(-1.0, mp), std::domain_error);
  CHECK_THROWS_AS(force(-1.5, mp), std::domain_error);
  CHECK_THROWS_AS(g_log(-1.0), std::domain_error);
  CHECK_THROWS_AS(force_deriv(-1.0, 2, mp), std::domain_error);
  CHECK_THROWS_AS(force_deriv(0.0, 5, mp), std::invalid_argument);
  CHECK_THROWS_AS(g_log(0.0, 3), std::invalid_argument);
}
