#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"
#include "dtt/double_double.hpp"

using namespace dtt;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {
Big big(const DoubleDouble& x) { return Big(x.hi) + Big(x.lo); }
}

TEST_CASE("two_sum and two_prod are error free") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng) * 1e-9;
    const DoubleDouble s = dd::two_sum(a, b);
    CHECK(big(s) == Big(a) + Big(b));
    const DoubleDouble p = dd::two_prod(a, b);
    CHECK(big(p) == Big(a) * Big(b));
  }
}

TEST_CASE("double-double products and sqrt keep about 31 digits") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 100.0);
  for (int i = 0; i < 200; ++i) {
    const DoubleDouble a = dd::two_sum(u(rng), u(rng) * 1e-17);
    const double b = u(rng);
    const Big exact = big(a) * Big(b);
    CHECK(abs(big(a * b) - exact) / exact < Big(1e-30));
    const Big root = sqrt(big(a));
    CHECK(abs(big(sqrt(a)) - root) / root < Big(1e-30));
  }
}

TEST_CASE("angle reduction matches a 50-digit reduction") {
  const Big two_pi = boost::math::constants::two_pi<Big>();
  for (double x : {0.5, 3.3, 1e3, 123456.789, 9.87654321e6}) {
    const DoubleDouble a = dd::two_prod(x, 1.0000000001);
    Big r = fmod(big(a), two_pi);
    if (r > boost::math::constants::pi<Big>()) r -= two_pi;
    CHECK(std::abs(dd::reduce_angle(a) - static_cast<double>(r)) < 5e-16);
  }
}

TEST_CASE("compensated sum recovers cancelled terms") {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e-17);
  s.add(-1.0);
  CHECK(s.value() == 1e-17);
}
