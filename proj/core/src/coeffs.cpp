#include "elsim/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "elsim/errors.hpp"

namespace elsim {

namespace {

ConstraintCheck at_most(std::string name, double lhs, double rhs, double tol) {
  // lhs <= rhs + tol
  const double miss = lhs - rhs;
  return {std::move(name), miss <= tol, std::max(miss, 0.0)};
}

ConstraintCheck strictly_below(std::string name, double lhs, double rhs) {
  const double miss = lhs - rhs;
  return {std::move(name), miss < 0.0, std::max(miss, 0.0)};
}

ConstraintCheck equal(std::string name, double lhs, double rhs, double tol) {
  const double miss = std::abs(lhs - rhs);
  return {std::move(name), miss <= tol, miss};
}

}  // namespace

LeslieCoefficients from_alpha(double alpha, double nu, double epsilon) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParameterError("from_alpha: alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  if (!(nu > 0.0)) throw ParameterError("from_alpha: nu must be positive");
  if (!(epsilon > 0.0)) throw ParameterError("from_alpha: epsilon must be positive");

  LeslieCoefficients c;
  c.lambda1 = -1.0;
  c.lambda2 = 2.0 * alpha - 1.0;
  c.mu1 = 0.0;
  c.mu2 = -alpha;
  c.mu3 = 1.0 - alpha;
  c.mu4 = nu;
  c.mu5 = alpha * (2.0 * alpha - 1.0);
  c.mu6 = (alpha - 1.0) * (2.0 * alpha - 1.0);
  c.epsilon = epsilon;
  return c;
}

std::string RegimeReport::regime() const {
  if (case1 && case2) return "case1+case2";
  if (case1) return "case1";
  if (case2) return "case2";
  return "none";
}

RegimeReport validate(const LeslieCoefficients& c, double tol) {
  RegimeReport r;
  const double mu56 = c.mu5 + c.mu6;

  r.base.push_back(strictly_below("lambda1<0", c.lambda1, 0.0));
  r.base.push_back(at_most("mu1>=0", -c.mu1, 0.0, 0.0));
  r.base.push_back(strictly_below("mu4>0", -c.mu4, 0.0));
  r.base.push_back(at_most("mu5+mu6>=0", -mu56, 0.0, 0.0));
  r.base.push_back(equal("lambda1=mu2-mu3", c.lambda1, c.mu2 - c.mu3, tol));
  r.base.push_back(equal("lambda2=mu5-mu6", c.lambda2, c.mu5 - c.mu6, tol));
  r.base.push_back(strictly_below("epsilon>0", -c.epsilon, 0.0));

  r.base_ok = std::all_of(r.base.begin(), r.base.end(),
                          [](const ConstraintCheck& k) { return k.satisfied; });
  for (const auto& k : r.base) {
    if (!k.satisfied) r.violations.push_back(k);
  }

  r.parodi = equal("mu2+mu3=mu6-mu5", c.mu2 + c.mu3, c.mu6 - c.mu5, tol);
  r.parodi_holds = r.parodi.satisfied;

  if (c.lambda1 < 0.0) {
    r.case1_inequality = at_most("lambda2^2/(-lambda1)<=mu5+mu6",
                                 c.lambda2 * c.lambda2 / (-c.lambda1), mu56, tol);
  } else {
    r.case1_inequality = {"lambda2^2/(-lambda1)<=mu5+mu6", false,
                          std::numeric_limits<double>::infinity()};
  }

  const double cross = std::abs(c.lambda2 - c.mu2 - c.mu3);
  if (c.lambda1 < 0.0 && mu56 >= 0.0) {
    const double bound = 2.0 * std::sqrt(-c.lambda1) * std::sqrt(mu56);
    r.case2_inequality = strictly_below("|lambda2-mu2-mu3|<2sqrt(-lambda1)sqrt(mu5+mu6)",
                                        cross, bound - tol);
  } else {
    r.case2_inequality = {"|lambda2-mu2-mu3|<2sqrt(-lambda1)sqrt(mu5+mu6)", false,
                          std::numeric_limits<double>::infinity()};
  }

  r.case1 = r.base_ok && r.parodi_holds && r.case1_inequality.satisfied;
  r.case2 = r.base_ok && r.case2_inequality.satisfied;
  return r;
}

DissipationForm dissipation_form(const LeslieCoefficients& c, double tol) {
  DissipationForm f;
  f.a_nn = -c.lambda1;
  f.a_na = -(c.lambda2 - c.mu2 - c.mu3);
  f.a_aa = c.mu5 + c.mu6;
  f.discriminant = f.a_na * f.a_na - 4.0 * f.a_nn * f.a_aa;
  // Same slack as the Case 1 check after dividing by 4 a_nn.
  f.psd = f.a_nn >= 0.0 && f.a_aa >= 0.0 && f.discriminant <= 4.0 * f.a_nn * tol;
  return f;
}

double eta_margin(const DissipationForm& form) {
  if (!form.psd) {
    throw RegimeError("eta_margin: dissipation form is not positive semidefinite");
  }
  const double mean = 0.5 * (form.a_nn + form.a_aa);
  const double half_gap = std::hypot(0.5 * (form.a_nn - form.a_aa), 0.5 * form.a_na);
  return std::max(mean - half_gap, 0.0);
}

double eta_margin(const LeslieCoefficients& c) { return eta_margin(dissipation_form(c)); }

}  // namespace elsim
