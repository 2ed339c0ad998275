#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kspe/errors.hpp"
#include "kspe/regime.hpp"

using kspe::regime::Rational;
using kspe::regime::Regime;

TEST_SUITE("regime") {

TEST_CASE("rationals parse and print round trip") {
  CHECK(kspe::regime::parse_rational("6/5") == Rational(6, 5));
  CHECK(kspe::regime::parse_rational("3") == Rational(3));
  CHECK(kspe::regime::parse_rational("10/4") == Rational(5, 2));  // reduced
  CHECK(kspe::regime::to_string(Rational(30, 13)) == "30/13");
  CHECK(kspe::regime::to_string(Rational(7)) == "7");
  CHECK(kspe::regime::to_string(kspe::regime::parse_rational("15/2")) == "15/2");

  CHECK_THROWS_AS(kspe::regime::parse_rational(""), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::parse_rational("3x"), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::parse_rational("x"), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::parse_rational("4/"), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::parse_rational("/5"), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::parse_rational("2/3/4"), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::parse_rational("4/0"), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::parse_rational("9223372036854775808"),
                  kspe::invalid_input);
}

TEST_CASE("classification matches the hand-computed table") {
  struct Row {
    int dim;
    const char* m;
    const char* regime;
    const char* m_star;  // empty when the formula leaves its range
    const char* m_dstar;
    const char* gamma;
  };
  const Row table[] = {
      {3, "1", "entropy", "5/4", "5/3", ""},
      {3, "6/5", "distributional", "30/19", "30/13", "9/13"},
      {3, "10/9", "distributional", "10/7", "2", "3/5"},
      {3, "10/7", "finite_energy", "2", "10/3", "1"},
      {3, "2", "finite_energy", "10/3", "10", "3"},
      {3, "3", "bounded", "15/2", "", ""},
      {4, "1", "entropy", "6/5", "3/2", ""},
      {4, "2", "finite_energy", "3", "6", "2"},
  };
  const auto opt = [](const std::optional<Rational>& v) {
    return v ? kspe::regime::to_string(*v) : std::string();
  };
  for (const auto& row : table) {
    CAPTURE(row.dim);
    CAPTURE(row.m);
    const auto rep =
        kspe::regime::classify(kspe::regime::parse_rational(row.m), row.dim);
    CHECK(kspe::regime::to_string(rep.regime) == row.regime);
    CHECK(opt(rep.m_star) == row.m_star);
    CHECK(opt(rep.m_dstar) == row.m_dstar);
    CHECK(opt(rep.gamma) == row.gamma);
  }
}

TEST_CASE("predicted spaces spell out the frozen claims") {
  const auto texts = [](const kspe::regime::RegimeReport& rep) {
    std::vector<std::string> out;
    for (const auto& c : rep.predicted_spaces) out.push_back(c.to_text());
    return out;
  };

  const auto fe = kspe::regime::classify(Rational(2), 3);
  CHECK(texts(fe) == std::vector<std::string>{"L^inf(0,T; L^6)",
                                              "L^2(0,T; W^{1,2}_0)",
                                              "L^10(0,T; L^10)"});

  // the sup-in-time band for dim 4, m 2 sits at L^4
  const auto band = kspe::regime::classify(Rational(2), 4);
  CHECK(texts(band) == std::vector<std::string>{"L^inf(0,T; L^4)",
                                                "L^2(0,T; W^{1,2}_0)",
                                                "L^6(0,T; L^6)"});

  // m = 1 only reaches the open ranges below the formula exponents
  const auto ent = kspe::regime::classify(Rational(1), 3);
  CHECK(texts(ent) ==
        std::vector<std::string>{
            "L^inf(0,T; L^1)",
            "L^5/3(0,T; L^5/3) for every exponent strictly below",
            "L^5/4(0,T; W^{1,5/4}_0) for every exponent strictly below"});

  const auto bd = kspe::regime::classify(Rational(3), 3);
  CHECK(texts(bd) == std::vector<std::string>{"L^inf(0,T; L^2)",
                                              "L^2(0,T; W^{1,2}_0)",
                                              "L^inf(0,T; L^inf)"});
}

TEST_CASE("the midpoint m = (dim+2)/2 keeps only unconditional claims") {
  const auto rep = kspe::regime::classify(Rational(5, 2), 3);
  CHECK(rep.regime == Regime::finite_energy);
  REQUIRE(rep.m_star.has_value());
  CHECK(*rep.m_star == Rational(5));
  CHECK(!rep.m_dstar.has_value());
  CHECK(!rep.gamma.has_value());
  REQUIRE(rep.predicted_spaces.size() == 2);
  CHECK(rep.predicted_spaces[0].to_text() == "L^inf(0,T; L^1)");
  CHECK(rep.predicted_spaces[1].to_text() == "L^2(0,T; W^{1,2}_0)");
}

TEST_CASE("interior thresholds belong to the regime above them") {
  const Rational eps(1, 1000000);
  for (int dim : {3, 4, 5}) {
    CAPTURE(dim);
    const Rational mid_low(2 * dim + 4, dim + 6);
    const Rational mid_high(2 * dim + 4, dim + 4);
    const Rational upper(dim + 2, 2);

    CHECK(kspe::regime::classify(mid_low, dim).regime == Regime::distributional);
    CHECK(kspe::regime::classify(mid_low - eps, dim).regime == Regime::entropy);
    CHECK(kspe::regime::classify(mid_high, dim).regime == Regime::finite_energy);
    CHECK(kspe::regime::classify(mid_high - eps, dim).regime ==
          Regime::distributional);
    CHECK(kspe::regime::classify(upper, dim).regime == Regime::finite_energy);
    CHECK(kspe::regime::classify(upper - eps, dim).regime ==
          Regime::finite_energy);
    CHECK(kspe::regime::classify(upper + eps, dim).regime == Regime::bounded);
  }
}

TEST_CASE("star composed with itself gives dstar and gamma closes the loop") {
  // dstar(m) = star(star(m)) and (2 gamma - 1) m / (m - 1) = dstar(m)
  // whenever 1 < m < (dim+2)/2.
  std::mt19937_64 rng(0x7e91u);
  int checked = 0;
  while (checked < 1200) {
    const int dim = 3 + static_cast<int>(rng() % 3);
    const long long den = 1 + static_cast<long long>(rng() % 40);
    const long long lo = den + 1;
    const long long hi = (den * (dim + 2) - 1) / 2;
    if (hi < lo) continue;
    const long long num = lo + static_cast<long long>(rng() % (hi - lo + 1));
    const Rational m(num, den);

    const auto once = kspe::regime::star(m, dim);
    CHECK(kspe::regime::dstar(m, dim) == kspe::regime::star(once, dim));
    const auto g = kspe::regime::energy_power(m, dim);
    CHECK((2 * g - 1) * m / (m - 1) == kspe::regime::dstar(m, dim));
    ++checked;
  }
  CHECK(checked == 1200);
}

TEST_CASE("exponent formulas reject out-of-range input") {
  CHECK_THROWS_AS(kspe::regime::star(Rational(5), 3), kspe::domain_error);
  CHECK_THROWS_AS(kspe::regime::star(Rational(6), 3), kspe::domain_error);
  CHECK_THROWS_AS(kspe::regime::star(Rational(1, 2), 3), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::star(Rational(2), 0), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::dstar(Rational(5, 2), 3), kspe::domain_error);
  CHECK_NOTHROW(kspe::regime::dstar(Rational(5, 2) - Rational(1, 100), 3));
  CHECK_THROWS_AS(kspe::regime::energy_power(Rational(1), 3), kspe::domain_error);
  CHECK_THROWS_AS(kspe::regime::energy_power(Rational(5, 2), 3),
                  kspe::domain_error);
  CHECK_THROWS_AS(kspe::regime::classify(Rational(1, 2), 3), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::classify(Rational(2), 1), kspe::invalid_input);
}

TEST_CASE("dimension two reports exponents but asserts nothing") {
  const auto rep = kspe::regime::classify(Rational(3, 2), 2);
  CHECK(rep.regime == Regime::outside_theory);
  REQUIRE(rep.m_star.has_value());
  CHECK(*rep.m_star == Rational(12, 5));
  REQUIRE(rep.m_dstar.has_value());
  CHECK(*rep.m_dstar == Rational(6));
  REQUIRE(rep.gamma.has_value());
  CHECK(*rep.gamma == Rational(3, 2));
  CHECK(rep.predicted_spaces.empty());
}

TEST_CASE("vanishing level closed form") {
  CHECK(kspe::regime::stampacchia_zero(1.0, 2.0, 2.0, 1.0) == 4.0);
  CHECK(kspe::regime::stampacchia_zero(1.0 / 64.0, 2.0, 3.0, 1.0) == 1.0);
  CHECK(kspe::regime::stampacchia_zero(0.0, 2.0, 2.0, 5.0) == 0.0);
  CHECK(kspe::regime::stampacchia_zero(3.0, 2.0, 2.0, 0.0) == 0.0);

  CHECK_THROWS_AS(kspe::regime::stampacchia_zero(1.0, 1.0, 2.0, 1.0),
                  kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::stampacchia_zero(1.0, 2.0, 0.0, 1.0),
                  kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::stampacchia_zero(-1.0, 2.0, 2.0, 1.0),
                  kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::stampacchia_zero(1.0, 2.0, 2.0, -1.0),
                  kspe::invalid_input);
  const double nan = std::nan("");
  CHECK_THROWS_AS(kspe::regime::stampacchia_zero(1.0, nan, 2.0, 1.0),
                  kspe::invalid_input);
}

TEST_CASE("vanishing level grows with the constant and the seed value") {
  std::mt19937_64 rng(0x0a17u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double big_m = 10.0 * unit(rng);
    const double psi0 = 10.0 * unit(rng);
    const double delta = 1.0 + 4.0 * unit(rng) + 1e-3;
    const double gamma = 4.0 * unit(rng) + 1e-3;
    const double d = kspe::regime::stampacchia_zero(big_m, delta, gamma, psi0);
    CHECK(d >= 0.0);
    CHECK(kspe::regime::stampacchia_zero(2.0 * big_m, delta, gamma, psi0) >= d);
    CHECK(kspe::regime::stampacchia_zero(big_m, delta, gamma, 2.0 * psi0) >= d);
  }
}

TEST_CASE("decay verification accepts the cubic family") {
  // psi(h) = (1-h)_+^3 satisfies psi(h) <= psi(k)^2 / (64 (h-k)^3) exactly,
  // with equality when h - k = 1 - h; AM-GM does the rest.
  const auto psi = [](double h) {
    const double t = 1.0 - h;
    return t > 0.0 ? t * t * t : 0.0;
  };
  const auto rep =
      kspe::regime::stampacchia_verify(psi, 1.0 / 64.0, 2.0, 3.0, 2.0, 64);
  CHECK(rep.hypothesis_holds);
  CHECK(rep.d == 1.0);
  CHECK(rep.psi_at_d == 0.0);
  CHECK(rep.zero_attained);
}

TEST_CASE("decay verification pins the first failing pair") {
  // 1/(1+h) decays too slowly for delta = 2, gamma = 1; the scan hits
  // k = 1, h = 2 first (1/3 > psi(1)^2 / 1 = 1/4).
  const auto psi = [](double h) { return 1.0 / (1.0 + h); };
  const auto rep = kspe::regime::stampacchia_verify(psi, 1.0, 2.0, 1.0, 64.0, 64);
  CHECK(!rep.hypothesis_holds);
  CHECK(rep.violating_k == 1.0);
  CHECK(rep.violating_h == 2.0);
  CHECK(rep.d == 4.0);
  CHECK(rep.psi_at_d == doctest::Approx(0.2));
  CHECK(!rep.zero_attained);
}

TEST_CASE("decay verification rejects growth outright") {
  const auto psi = [](double h) { return h; };
  const auto rep = kspe::regime::stampacchia_verify(psi, 1.0, 2.0, 1.0, 1.0, 4);
  CHECK(!rep.hypothesis_holds);
  CHECK(rep.violating_k == 0.0);
  CHECK(rep.violating_h == 0.25);
}

TEST_CASE("decay verification rejects bad arguments") {
  const auto psi = [](double h) { return 1.0 / (1.0 + h); };
  CHECK_THROWS_AS(kspe::regime::stampacchia_verify(psi, 1.0, 2.0, 1.0, 0.0, 8),
                  kspe::invalid_input);
  CHECK_THROWS_AS(kspe::regime::stampacchia_verify(psi, 1.0, 2.0, 1.0, 1.0, 1),
                  kspe::invalid_input);
  const auto bad = [](double h) { return -1.0 - h; };
  CHECK_THROWS_AS(kspe::regime::stampacchia_verify(bad, 1.0, 2.0, 1.0, 1.0, 8),
                  kspe::invalid_input);
}

}  // TEST_SUITE("regime")
