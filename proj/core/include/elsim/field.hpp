#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "elsim/grid.hpp"

namespace elsim {

/// Real-space samples of a multi-component field, stored component-major.
class FieldData {
 public:
  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t components() const { return ncomp_; }
  std::size_t points() const { return grid_->size(); }

  std::span<double> component(std::size_t c);
  std::span<const double> component(std::size_t c) const;
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool is_finite() const;
  /// Throws NonFiniteError naming `what` if any sample is NaN or Inf.
  void require_finite(std::string_view what) const;

  bool same_shape(const FieldData& other) const;
  void fill(double value);

 protected:
  FieldData(GridPtr grid, std::size_t ncomp);

  FieldData& add_scaled(double a, const FieldData& x);
  FieldData& scale(double a);

 private:
  GridPtr grid_;
  std::size_t ncomp_;
  std::vector<double> data_;
};

class ScalarField : public FieldData {
 public:
  explicit ScalarField(GridPtr grid) : FieldData(std::move(grid), 1) {}

  std::span<double> values() { return component(0); }
  std::span<const double> values() const { return component(0); }
  double& operator[](std::size_t p) { return values()[p]; }
  double operator[](std::size_t p) const { return values()[p]; }

  ScalarField& operator+=(const ScalarField& o) { add_scaled(1.0, o); return *this; }
  ScalarField& operator-=(const ScalarField& o) { add_scaled(-1.0, o); return *this; }
  ScalarField& operator*=(double a) { scale(a); return *this; }
  ScalarField& axpy(double a, const ScalarField& x) { add_scaled(a, x); return *this; }
};

class VectorField : public FieldData {
 public:
  VectorField(GridPtr grid, std::size_t ncomp) : FieldData(std::move(grid), ncomp) {}

  VectorField& operator+=(const VectorField& o) { add_scaled(1.0, o); return *this; }
  VectorField& operator-=(const VectorField& o) { add_scaled(-1.0, o); return *this; }
  VectorField& operator*=(double a) { scale(a); return *this; }
  VectorField& axpy(double a, const VectorField& x) { add_scaled(a, x); return *this; }
};

/// Rank-two field; entry (i, j) is stored as component i * cols + j.
class TensorField : public FieldData {
 public:
  TensorField(GridPtr grid, std::size_t rows, std::size_t cols)
      : FieldData(std::move(grid), rows * cols), rows_(rows), cols_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> operator()(std::size_t i, std::size_t j) { return component(i * cols_ + j); }
  std::span<const double> operator()(std::size_t i, std::size_t j) const {
    return component(i * cols_ + j);
  }

  TensorField transpose() const;

  TensorField& operator+=(const TensorField& o) { add_scaled(1.0, o); return *this; }
  TensorField& operator-=(const TensorField& o) { add_scaled(-1.0, o); return *this; }
  TensorField& operator*=(double a) { scale(a); return *this; }
  TensorField& axpy(double a, const TensorField& x) { add_scaled(a, x); return *this; }

 private:
  std::size_t rows_;
  std::size_t cols_;
};

template <class F>
concept Field = std::derived_from<F, FieldData>;

template <Field F>
F operator+(F a, const F& b) { return a += b; }
template <Field F>
F operator-(F a, const F& b) { return a -= b; }
template <Field F>
F operator*(double s, F a) { return a *= s; }

/// Box average of a single real-space array (= integral over the unit box).
double mean(std::span<const double> values);

/// L2 inner product over the unit box summed over components.
double inner(const FieldData& a, const FieldData& b);
double l2_norm(const FieldData& f);
/// Sup over grid points of the pointwise Euclidean (Frobenius) magnitude.
/// A lower bound for the true sup of the interpolant.
double sup_norm(const FieldData& f);
/// Sup over points and components of |a - b|.
double max_abs_difference(const FieldData& a, const FieldData& b);

}  // namespace elsim
