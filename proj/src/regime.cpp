#include "kspe/regime.hpp"

#include <cmath>

namespace kspe::regime {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {
long long parse_integer(const std::string& text, const std::string& whole) {
  std::size_t consumed = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &consumed);
  } catch (const std::invalid_argument&) {
    throw invalid_input("rational: cannot parse '" + whole + "'");
  } catch (const std::out_of_range&) {
    throw invalid_input("rational: out of range '" + whole + "'");
  }
  if (consumed != text.size())
    throw invalid_input("rational: cannot parse '" + whole + "'");
  return v;
}
}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(text, text), 1);
  const long long num = parse_integer(text.substr(0, slash), text);
  const long long den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw invalid_input("rational: zero denominator in '" + text + "'");
  return Rational(num, den);
}

Rational star(const Rational& p, int dim) {
  if (dim < 1) throw invalid_input("star: dim must be positive");
  const Rational cap(dim + 2, 1);
  if (p < Rational(1)) throw invalid_input("star: exponent must be >= 1");
  if (p >= cap)
    throw domain_error("star: undefined for p >= dim+2 (got p = " + to_string(p) + ")");
  return cap * p / (cap - p);
}

Rational dstar(const Rational& p, int dim) {
  if (dim < 1) throw invalid_input("dstar: dim must be positive");
  const Rational cap(dim + 2, 1);
  if (p < Rational(1)) throw invalid_input("dstar: exponent must be >= 1");
  if (2 * p >= cap)
    throw domain_error("dstar: undefined for p >= (dim+2)/2 (got p = " + to_string(p) + ")");
  return cap * p / (cap - 2 * p);
}

Rational energy_power(const Rational& m, int dim) {
  if (dim < 1) throw invalid_input("energy_power: dim must be positive");
  const Rational cap(dim + 2, 1);
  if (m <= Rational(1) || 2 * m >= cap)
    throw domain_error("energy_power: defined only for 1 < m < (dim+2)/2 (got m = " +
                       to_string(m) + ")");
  return Rational(dim, 1) * m / (2 * (cap - 2 * m));
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::bounded: return "bounded";
    case Regime::finite_energy: return "finite_energy";
    case Regime::distributional: return "distributional";
    case Regime::entropy: return "entropy";
    case Regime::outside_theory: return "outside_theory";
  }
  return "?";
}

RegimeReport classify(const Rational& m, int dim) {
  if (dim < 2) throw invalid_input("classify: dim must be at least 2");
  if (m < Rational(1)) throw invalid_input("classify: m must be >= 1");

  RegimeReport report;
  report.dim = dim;
  report.m = m;

  const Rational cap(dim + 2, 1);
  if (m < cap) report.m_star = star(m, dim);
  if (2 * m < cap) report.m_dstar = dstar(m, dim);
  if (m > Rational(1) && 2 * m < cap) report.gamma = energy_power(m, dim);

  if (dim == 2) {
    // The estimates underlying every claim assume dim >= 3; exponents above
    // are still well-defined formulas, but no membership is asserted.
    report.regime = Regime::outside_theory;
    return report;
  }

  const Rational upper = cap / 2;                 // (N+2)/2
  const Rational mid_high(2 * dim + 4, dim + 4);  // energy threshold
  const Rational mid_low(2 * dim + 4, dim + 6);   // m** = 2 threshold

  const auto sup_in_time = [](Rational q) {
    return SpaceClaim{true, Rational(1), false, q, false, false};
  };
  const auto space_time = [](Rational p, bool grad, bool strict) {
    return SpaceClaim{false, p, false, p, grad, strict};
  };

  if (m > upper) {
    report.regime = Regime::bounded;
    SpaceClaim everywhere;  // L^inf in time and space
    everywhere.r_infinite = everywhere.q_infinite = true;
    report.predicted_spaces = {sup_in_time(Rational(2)),            // C0([0,T]; L2)
                               space_time(Rational(2), true, false),  // L2(H1_0)
                               everywhere};
    return report;
  }
  if (m == upper) {
    // Neither endpoint theorem covers m == (N+2)/2 directly; Lebesgue-space
    // inclusion on the bounded box puts it in the finite-energy regime for
    // every exponent below m, but the borderline exponents themselves blow
    // up, so only the unconditional claims are listed.
    report.regime = Regime::finite_energy;
    report.predicted_spaces = {sup_in_time(Rational(1)),
                               space_time(Rational(2), true, false)};
    return report;
  }
  const Rational linf_band = Rational(dim, 1) * m / (cap - 2 * m);
  if (m >= mid_high) {
    report.regime = Regime::finite_energy;
    report.predicted_spaces = {sup_in_time(linf_band),
                               space_time(Rational(2), true, false),
                               space_time(*report.m_dstar, false, false)};
    return report;
  }
  if (m >= mid_low) {
    report.regime = Regime::distributional;
    report.predicted_spaces = {sup_in_time(linf_band),
                               space_time(*report.m_star, true, false),
                               space_time(*report.m_dstar, false, false)};
    return report;
  }
  report.regime = Regime::entropy;
  const bool strict = (m == Rational(1));
  report.predicted_spaces = {sup_in_time(Rational(1)),
                             space_time(*report.m_dstar, false, strict),
                             space_time(*report.m_star, true, strict)};
  return report;
}

std::string SpaceClaim::to_text() const {
  const std::string rr = r_infinite ? "inf" : to_string(r);
  const std::string qq = q_infinite ? "inf" : to_string(q);
  const std::string inner = with_gradient ? ("W^{1," + qq + "}_0") : ("L^" + qq);
  std::string text = "L^" + rr + "(0,T; " + inner + ")";
  if (strict) text += " for every exponent strictly below";
  return text;
}

double stampacchia_zero(double big_m, double delta, double gamma, double psi0) {
  if (!(delta > 1.0)) throw invalid_input("stampacchia: delta must exceed 1");
  if (!(gamma > 0.0)) throw invalid_input("stampacchia: gamma must be positive");
  if (!(big_m >= 0.0)) throw invalid_input("stampacchia: the constant must be nonnegative");
  if (!(psi0 >= 0.0)) throw invalid_input("stampacchia: psi(0) must be nonnegative");
  if (psi0 == 0.0 || big_m == 0.0) return 0.0;
  const double base =
      big_m * std::pow(psi0, delta - 1.0) * std::pow(2.0, delta * gamma / (delta - 1.0));
  return std::pow(base, 1.0 / gamma);
}

StampacchiaReport stampacchia_verify(const std::function<double(double)>& psi,
                                     double big_m, double delta, double gamma,
                                     double h_max, int mesh_points) {
  if (!(h_max > 0.0)) throw invalid_input("stampacchia: h_max must be positive");
  if (mesh_points < 2) throw invalid_input("stampacchia: need at least two mesh points");

  StampacchiaReport report;
  std::vector<double> level(mesh_points + 1), value(mesh_points + 1);
  for (int i = 0; i <= mesh_points; ++i) {
    level[i] = h_max * static_cast<double>(i) / mesh_points;
    value[i] = psi(level[i]);
    if (!(value[i] >= 0.0))
      throw invalid_input("stampacchia: sampler must return nonnegative values");
  }

  report.hypothesis_holds = true;
  const double slack = 1e-9;
  for (int i = 0; i <= mesh_points && report.hypothesis_holds; ++i) {
    if (i + 1 <= mesh_points && value[i + 1] > value[i] * (1.0 + slack) + 1e-12) {
      report.hypothesis_holds = false;  // not nonincreasing
      report.violating_k = level[i];
      report.violating_h = level[i + 1];
      break;
    }
    for (int j = i + 1; j <= mesh_points; ++j) {
      const double bound =
          big_m * std::pow(value[i], delta) / std::pow(level[j] - level[i], gamma);
      if (value[j] > bound * (1.0 + slack) + 1e-12) {
        report.hypothesis_holds = false;
        report.violating_k = level[i];
        report.violating_h = level[j];
        break;
      }
    }
  }

  report.d = stampacchia_zero(big_m, delta, gamma, value[0]);
  report.psi_at_d = psi(report.d);
  report.zero_attained = report.psi_at_d <= 1e-12;
  return report;
}

}  // namespace kspe::regime
