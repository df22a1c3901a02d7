#include "elsim/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "elsim/errors.hpp"

namespace elsim {

FieldData::FieldData(GridPtr grid, std::size_t ncomp)
    : grid_(std::move(grid)), ncomp_(ncomp) {
  if (!grid_) throw ParameterError("field requires a grid");
  data_.assign(ncomp_ * grid_->size(), 0.0);
}

std::span<double> FieldData::component(std::size_t c) {
  if (c >= ncomp_) throw ParameterError("field component index out of range");
  return std::span<double>(data_).subspan(c * grid_->size(), grid_->size());
}

std::span<const double> FieldData::component(std::size_t c) const {
  if (c >= ncomp_) throw ParameterError("field component index out of range");
  return std::span<const double>(data_).subspan(c * grid_->size(), grid_->size());
}

bool FieldData::is_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void FieldData::require_finite(std::string_view what) const {
  if (!is_finite()) throw NonFiniteError(std::string(what) + ": non-finite sample");
}

bool FieldData::same_shape(const FieldData& other) const {
  return ncomp_ == other.ncomp_ && grid_->same_shape(*other.grid_);
}

void FieldData::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

FieldData& FieldData::add_scaled(double a, const FieldData& x) {
  if (!same_shape(x)) throw GridMismatchError("field arithmetic on mismatched shapes");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
  return *this;
}

FieldData& FieldData::scale(double a) {
  for (auto& v : data_) v *= a;
  return *this;
}

TensorField TensorField::transpose() const {
  TensorField t(grid_ptr(), cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const auto src = (*this)(i, j);
      std::copy(src.begin(), src.end(), t(j, i).begin());
    }
  }
  return t;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double inner(const FieldData& a, const FieldData& b) {
  if (!a.same_shape(b)) throw GridMismatchError("inner product of mismatched fields");
  const auto x = a.data();
  const auto y = b.data();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s / static_cast<double>(a.points());
}

double l2_norm(const FieldData& f) { return std::sqrt(inner(f, f)); }

double sup_norm(const FieldData& f) {
  std::vector<double> mag2(f.points(), 0.0);
  for (std::size_t c = 0; c < f.components(); ++c) {
    const auto v = f.component(c);
    for (std::size_t p = 0; p < v.size(); ++p) mag2[p] += v[p] * v[p];
  }
  return std::sqrt(*std::max_element(mag2.begin(), mag2.end()));
}

double max_abs_difference(const FieldData& a, const FieldData& b) {
  if (!a.same_shape(b)) throw GridMismatchError("difference of mismatched fields");
  const auto x = a.data();
  const auto y = b.data();
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, std::abs(x[i] - y[i]));
  return best;
}

}  // namespace elsim
