#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "elsim/field.hpp"
#include "elsim/grid.hpp"

namespace elsim {

/// Fourier coefficients of every component of a field.
class Spectrum {
 public:
  Spectrum(GridPtr grid, std::size_t ncomp);
  static Spectrum of(const FieldData& f);

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t components() const { return coeffs_.size(); }
  std::span<Complex> component(std::size_t c) { return coeffs_.at(c); }
  std::span<const Complex> component(std::size_t c) const { return coeffs_.at(c); }

  /// Writes the inverse transform of every component into `out`.
  void to_real(FieldData& out) const;
  /// Writes d/dx_axis of component c into `out`.
  void derivative(std::size_t c, int axis, std::span<double> out) const;

  /// Zeroes every mode outside the 2/3-rule mask.
  void apply_dealias_mask();
  /// Zeroes every mode with max_j |k_j| > M.
  void truncate(int max_mode);
  /// Removes the gradient part of a dim-component spectrum in place.
  void project_divergence_free();

 private:
  GridPtr grid_;
  std::vector<std::vector<Complex>> coeffs_;
};

// Differential operators. Convention repo-wide: gradient entry (i, j) is d_i f_j
// and the divergence of a rank-two field contracts the first index,
// (div T)_j = sum_i d_i T_ij. All throw NonFiniteError on NaN/Inf input.

VectorField gradient(const ScalarField& f);
/// Result has rows = dim, cols = f.components().
TensorField gradient(const VectorField& f);
/// f.components() must equal dim.
ScalarField divergence(const VectorField& f);
/// T.rows() must equal dim; result has T.cols() components.
VectorField divergence(const TensorField& t);
/// 3D: the curl (3 components). 2D: the scalar vorticity d_1 v_2 - d_2 v_1 as a
/// one-component field.
VectorField curl(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& f);

/// L2-orthogonal projection onto divergence-free fields; the mean (k = 0 mode)
/// is left unchanged.
VectorField leray_project(const VectorField& v);

/// A = (grad u + grad^T u) / 2.
TensorField strain_rate(const VectorField& u);
/// omega = (grad u - grad^T u) / 2.
TensorField vorticity_tensor(const VectorField& u);

/// ||Lambda^s f|| with Lambda^s the multiplier (1 + |2 pi k|^2)^{s/2}; summed
/// over components. Throws ParameterError for s < 0.
double sobolev_norm(const FieldData& f, double s);
/// ||grad Lambda^s f||, i.e. the multiplier |2 pi k| (1 + |2 pi k|^2)^{s/2}.
double sobolev_gradient_norm(const FieldData& f, double s);

void dealias_in_place(FieldData& f);
/// Throws ParameterError unless 1 <= max_mode <= n/2.
void truncate_modes_in_place(FieldData& f, int max_mode);
/// Copies the Fourier modes common to both grids from `src` into `dst`.
void resample_into(const FieldData& src, FieldData& dst);

/// Projection onto modes with max_j |k_j| <= max_mode.
template <Field F>
F truncate_modes(F f, int max_mode) {
  truncate_modes_in_place(f, max_mode);
  return f;
}

template <Field F>
F dealias(F f) {
  dealias_in_place(f);
  return f;
}

}  // namespace elsim
