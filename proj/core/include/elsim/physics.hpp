#pragma once

#include <optional>

#include "elsim/coeffs.hpp"
#include "elsim/field.hpp"
#include "elsim/grid.hpp"

namespace elsim {

/// Velocity (dim components, divergence-free) and director (always three
/// components; in 2D the out-of-plane component is free) at one instant.
struct FieldState {
  double time = 0.0;
  VectorField u;
  VectorField d;

  /// u = 0, d = 0 on `grid` at time `time`.
  static FieldState zeros(const GridPtr& grid, double time = 0.0);

  const SpectralGrid& grid() const { return u.grid(); }
  bool is_finite() const { return u.is_finite() && d.is_finite(); }
};

struct ModelOptions {
  /// 2/3-rule truncation of every nonlinear product.
  bool dealias = true;
  /// Replace (u.grad)u by its skew-symmetric form [(u.grad)u + div(u (x) u)]/2.
  bool skew_symmetric_advection = false;
};

/// Convective mode projection and r-Laplacian of the regularised momentum
/// equation: the transporting velocity is [u]_M and the term
/// (1/M) div(|grad u|^{r-2} grad u) is added.
struct Regularization {
  int max_mode = 8;
  double r = 4.0;
};

/// Everything derived from one state that the right-hand sides and the
/// energy audit share. In 2D the tensors are 2x2 and Ad, omega d carry a zero
/// third component.
struct ConstitutiveBundle {
  TensorField grad_u;
  TensorField A;
  TensorField omega;
  TensorField grad_d;
  VectorField lap_d;
  ScalarField W_val;
  VectorField gradW;
  /// Molecular field Delta d - grad_d W(d).
  VectorField h;
  VectorField Ad;
  VectorField omega_d;
  /// Co-rotational transport from the constitutive side.
  VectorField N;
  ScalarField dAd;
  /// Full Leslie stress including mu4 A.
  TensorField sigma;
  TensorField ericksen;
};

struct PenaltyTerms {
  ScalarField W_val;
  VectorField gradW;
};

/// d_t = explicit_part + diffusion, diffusion = diffusivity * Delta d.
struct DirectorRhs {
  VectorField explicit_part;
  VectorField diffusion;
  VectorField total;
  double diffusivity = 0.0;
};

/// u_t = explicit_part + viscous, viscous = viscosity * Delta u. Both parts are
/// divergence-free.
struct MomentumRhs {
  VectorField explicit_part;
  VectorField viscous;
  VectorField total;
  double viscosity = 0.0;
};

/// Constitutive relations of the Ericksen-Leslie system with Ginzburg-Landau
/// penalty.
class ElModel {
 public:
  /// Throws RegimeError if lambda1 >= 0 and ParameterError if epsilon <= 0.
  explicit ElModel(LeslieCoefficients coeffs, ModelOptions options = {});

  const LeslieCoefficients& coefficients() const { return c_; }
  const ModelOptions& options() const { return opts_; }
  /// -1/lambda1.
  double director_diffusivity() const { return -1.0 / c_.lambda1; }
  /// mu4/2.
  double viscosity() const { return 0.5 * c_.mu4; }

  /// W = (|d|^2-1)^2/(4 eps^2), grad_d W = (|d|^2-1) d / eps^2.
  PenaltyTerms penalty(const VectorField& d) const;
  /// Entry (i, j) = grad_i d . grad_j d.
  TensorField ericksen_stress(const TensorField& grad_d) const;
  VectorField transport_N(const FieldState& s) const;

  ConstitutiveBundle bundle(const FieldState& s) const;

  TensorField leslie_stress(const FieldState& s, const ConstitutiveBundle& b) const;
  /// Stress from explicit ingredients; A must be dim x dim, d and N three-component.
  TensorField leslie_stress(const VectorField& d, const TensorField& A, const VectorField& N,
                            bool include_viscous = true) const;

  DirectorRhs director_rhs(const FieldState& s) const;
  DirectorRhs director_rhs(const FieldState& s, const ConstitutiveBundle& b) const;

  MomentumRhs momentum_rhs(const FieldState& s,
                           const std::optional<Regularization>& reg = std::nullopt) const;
  MomentumRhs momentum_rhs(const FieldState& s, const ConstitutiveBundle& b,
                           const std::optional<Regularization>& reg = std::nullopt) const;

  /// -(w.grad)u - div(grad d (.) grad d) + div(sigma - mu4 A) [+ r-Laplacian],
  /// before projection. The pressure gradient balances its gradient part.
  VectorField momentum_force(const FieldState& s, const ConstitutiveBundle& b,
                             const std::optional<Regularization>& reg) const;

  /// div(|grad u|^{r-2} grad u).
  VectorField r_laplacian(const TensorField& grad_u, double r) const;

 private:
  void truncate_product(FieldData& f) const;
  VectorField matvec(const TensorField& m, const VectorField& d) const;
  TensorField assemble_stress(const VectorField& d, const TensorField& A, const VectorField& N,
                              const VectorField& Ad, const ScalarField& dAd,
                              bool include_viscous) const;

  LeslieCoefficients c_;
  ModelOptions opts_;
};

}  // namespace elsim
