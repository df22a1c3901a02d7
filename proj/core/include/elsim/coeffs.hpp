#pragma once

#include <string>
#include <vector>

namespace elsim {

/// Absolute slack used for the equality constraints and the non-strict inequalities.
inline constexpr double kDefaultConstraintTolerance = 1e-12;

/// Kinematic transport and Leslie viscosity coefficients plus the
/// Ginzburg-Landau penalty scale. mu4 plays the role of the fluid viscosity.
struct LeslieCoefficients {
  double lambda1 = -1.0;
  double lambda2 = 0.0;
  double mu1 = 0.0;
  double mu2 = -0.5;
  double mu3 = 0.5;
  double mu4 = 1.0;
  double mu5 = 0.0;
  double mu6 = 0.0;
  double epsilon = 0.1;

  bool operator==(const LeslieCoefficients&) const = default;
};

/// Molecular-shape parametrisation: alpha = 1/2, 1, 0 for spherical, rod-like
/// and disc-like molecules. Throws ParameterError outside 0 <= alpha <= 1,
/// nu > 0, epsilon > 0.
LeslieCoefficients from_alpha(double alpha, double nu, double epsilon = 0.1);

/// One row of the constraint table.
struct ConstraintCheck {
  std::string name;
  bool satisfied = false;
  /// Signed amount by which the constraint is missed (0 when satisfied
  /// exactly; for equalities the absolute mismatch).
  double residual = 0.0;
};

struct RegimeReport {
  /// lambda1<0, mu1>=0, mu4>0, mu5+mu6>=0, lambda1=mu2-mu3, lambda2=mu5-mu6,
  /// epsilon>0, in that order.
  std::vector<ConstraintCheck> base;
  ConstraintCheck parodi;
  ConstraintCheck case1_inequality;
  ConstraintCheck case2_inequality;

  bool base_ok = false;
  bool parodi_holds = false;
  bool case1 = false;
  bool case2 = false;

  /// Failing base constraints only.
  std::vector<ConstraintCheck> violations;

  bool dissipative() const { return case1 || case2; }
  /// "case1+case2", "case1", "case2" or "none".
  std::string regime() const;
};

/// Evaluates every constraint with absolute tolerance `tol` on equalities.
/// Case 1 accepts lambda2^2/(-lambda1) <= mu5+mu6 + tol; Case 2 requires
/// |lambda2-mu2-mu3| < 2 sqrt(-lambda1) sqrt(mu5+mu6) - tol. Never throws.
RegimeReport validate(const LeslieCoefficients& c,
                      double tol = kDefaultConstraintTolerance);

/// D(n, a) = a_nn n^2 + a_na n a + a_aa a^2 in (|N|, |Ad|).
struct DissipationForm {
  double a_nn = 0.0;
  double a_na = 0.0;
  double a_aa = 0.0;
  /// a_na^2 - 4 a_nn a_aa.
  double discriminant = 0.0;
  bool psd = false;
};

DissipationForm dissipation_form(const LeslieCoefficients& c,
                                 double tol = kDefaultConstraintTolerance);

/// Smaller eigenvalue of [[a_nn, a_na/2], [a_na/2, a_aa]], clamped at zero.
/// Throws RegimeError when the form is not positive semidefinite.
double eta_margin(const DissipationForm& form);
double eta_margin(const LeslieCoefficients& c);

}  // namespace elsim
