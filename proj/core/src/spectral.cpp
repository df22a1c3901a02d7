#include "elsim/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "elsim/errors.hpp"

namespace elsim {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_vector_of_dim(const FieldData& f, const char* op) {
  if (static_cast<int>(f.components()) != f.grid().dim()) {
    throw GridMismatchError(std::string(op) + ": expected a field with dim components");
  }
}

}  // namespace

Spectrum::Spectrum(GridPtr grid, std::size_t ncomp) : grid_(std::move(grid)) {
  coeffs_.assign(ncomp, std::vector<Complex>(grid_->spectral_size()));
}

Spectrum Spectrum::of(const FieldData& f) {
  Spectrum s(f.grid_ptr(), f.components());
  for (std::size_t c = 0; c < f.components(); ++c) {
    f.grid().forward(f.component(c), s.coeffs_[c]);
  }
  return s;
}

void Spectrum::to_real(FieldData& out) const {
  if (out.components() != components() || !out.grid().same_shape(*grid_)) {
    throw GridMismatchError("Spectrum::to_real: shape mismatch");
  }
  for (std::size_t c = 0; c < components(); ++c) grid_->inverse(coeffs_[c], out.component(c));
}

void Spectrum::derivative(std::size_t c, int axis, std::span<double> out) const {
  const auto& src = coeffs_.at(c);
  const auto k = grid_->derivative_symbol(axis);
  std::vector<Complex> tmp(src.size());
  for (std::size_t m = 0; m < src.size(); ++m) tmp[m] = kI * k[m] * src[m];
  grid_->inverse(tmp, out);
}

void Spectrum::apply_dealias_mask() {
  const auto mask = grid_->dealias_mask();
  for (auto& comp : coeffs_) {
    for (std::size_t m = 0; m < comp.size(); ++m) {
      if (!mask[m]) comp[m] = 0.0;
    }
  }
}

void Spectrum::truncate(int max_mode) {
  const auto kmax = grid_->max_abs_wavenumber();
  for (auto& comp : coeffs_) {
    for (std::size_t m = 0; m < comp.size(); ++m) {
      if (kmax[m] > max_mode) comp[m] = 0.0;
    }
  }
}

void Spectrum::project_divergence_free() {
  const int dim = grid_->dim();
  if (static_cast<int>(components()) != dim) {
    throw GridMismatchError("projection needs a field with dim components");
  }
  for (std::size_t m = 0; m < grid_->spectral_size(); ++m) {
    double kk = 0.0;
    Complex kv = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double ki = grid_->derivative_symbol(i)[m];
      kk += ki * ki;
      kv += ki * coeffs_[static_cast<std::size_t>(i)][m];
    }
    if (kk == 0.0) continue;
    for (int i = 0; i < dim; ++i) {
      coeffs_[static_cast<std::size_t>(i)][m] -= grid_->derivative_symbol(i)[m] * kv / kk;
    }
  }
}

VectorField gradient(const ScalarField& f) {
  f.require_finite("gradient");
  const auto s = Spectrum::of(f);
  const int dim = f.grid().dim();
  VectorField out(f.grid_ptr(), static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) s.derivative(0, i, out.component(static_cast<std::size_t>(i)));
  return out;
}

TensorField gradient(const VectorField& f) {
  f.require_finite("gradient");
  const auto s = Spectrum::of(f);
  const auto dim = static_cast<std::size_t>(f.grid().dim());
  TensorField out(f.grid_ptr(), dim, f.components());
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < f.components(); ++j) {
      s.derivative(j, static_cast<int>(i), out(i, j));
    }
  }
  return out;
}

ScalarField divergence(const VectorField& f) {
  f.require_finite("divergence");
  require_vector_of_dim(f, "divergence");
  const auto s = Spectrum::of(f);
  const auto& g = f.grid();
  std::vector<Complex> acc(g.spectral_size(), 0.0);
  for (int i = 0; i < g.dim(); ++i) {
    const auto k = g.derivative_symbol(i);
    const auto c = s.component(static_cast<std::size_t>(i));
    for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += kI * k[m] * c[m];
  }
  ScalarField out(f.grid_ptr());
  g.inverse(acc, out.values());
  return out;
}

VectorField divergence(const TensorField& t) {
  t.require_finite("divergence");
  const auto& g = t.grid();
  if (static_cast<int>(t.rows()) != g.dim()) {
    throw GridMismatchError("divergence: tensor rows must equal the grid dimension");
  }
  VectorField out(t.grid_ptr(), t.cols());
  std::vector<Complex> spec(g.spectral_size());
  std::vector<Complex> acc(g.spectral_size());
  for (std::size_t j = 0; j < t.cols(); ++j) {
    std::fill(acc.begin(), acc.end(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < t.rows(); ++i) {
      g.forward(t(i, j), spec);
      const auto k = g.derivative_symbol(static_cast<int>(i));
      for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += kI * k[m] * spec[m];
    }
    g.inverse(acc, out.component(j));
  }
  return out;
}

VectorField curl(const VectorField& v) {
  v.require_finite("curl");
  require_vector_of_dim(v, "curl");
  const auto s = Spectrum::of(v);
  const auto& g = v.grid();
  std::vector<double> tmp(g.size());
  if (g.dim() == 2) {
    VectorField out(v.grid_ptr(), 1);
    auto w = out.component(0);
    s.derivative(1, 0, w);
    s.derivative(0, 1, tmp);
    for (std::size_t p = 0; p < tmp.size(); ++p) w[p] -= tmp[p];
    return out;
  }
  VectorField out(v.grid_ptr(), 3);
  for (std::size_t c = 0; c < 3; ++c) {
    const std::size_t a = (c + 1) % 3;
    const std::size_t b = (c + 2) % 3;
    // (curl v)_c = d_a v_b - d_b v_a
    auto w = out.component(c);
    s.derivative(b, static_cast<int>(a), w);
    s.derivative(a, static_cast<int>(b), tmp);
    for (std::size_t p = 0; p < tmp.size(); ++p) w[p] -= tmp[p];
  }
  return out;
}

namespace {

template <Field F>
F laplacian_impl(const F& f) {
  f.require_finite("laplacian");
  auto s = Spectrum::of(f);
  const auto k2 = f.grid().wavenumber_squared();
  for (std::size_t c = 0; c < s.components(); ++c) {
    auto comp = s.component(c);
    for (std::size_t m = 0; m < comp.size(); ++m) comp[m] *= -k2[m];
  }
  F out = f;
  s.to_real(out);
  return out;
}

}  // namespace

ScalarField laplacian(const ScalarField& f) { return laplacian_impl(f); }
VectorField laplacian(const VectorField& f) { return laplacian_impl(f); }

VectorField leray_project(const VectorField& v) {
  v.require_finite("leray_project");
  require_vector_of_dim(v, "leray_project");
  auto s = Spectrum::of(v);
  s.project_divergence_free();
  VectorField out(v.grid_ptr(), v.components());
  s.to_real(out);
  return out;
}

TensorField strain_rate(const VectorField& u) {
  require_vector_of_dim(u, "strain_rate");
  const auto grad = gradient(u);
  auto a = grad;
  a += grad.transpose();
  a *= 0.5;
  return a;
}

TensorField vorticity_tensor(const VectorField& u) {
  require_vector_of_dim(u, "vorticity_tensor");
  const auto grad = gradient(u);
  auto w = grad;
  w -= grad.transpose();
  w *= 0.5;
  return w;
}

namespace {

double weighted_spectral_norm(const FieldData& f, double s, bool with_gradient) {
  if (!(s >= 0.0)) throw ParameterError("Sobolev index must be nonnegative");
  f.require_finite("sobolev_norm");
  const auto& g = f.grid();
  const auto k2 = g.wavenumber_squared();
  const auto w = g.parseval_weight();
  std::vector<Complex> spec(g.spectral_size());
  double total = 0.0;
  for (std::size_t c = 0; c < f.components(); ++c) {
    g.forward(f.component(c), spec);
    for (std::size_t m = 0; m < spec.size(); ++m) {
      double mult = std::pow(1.0 + k2[m], s);
      if (with_gradient) mult *= k2[m];
      total += w[m] * mult * std::norm(spec[m]);
    }
  }
  return std::sqrt(total);
}

}  // namespace

double sobolev_norm(const FieldData& f, double s) { return weighted_spectral_norm(f, s, false); }

double sobolev_gradient_norm(const FieldData& f, double s) {
  return weighted_spectral_norm(f, s, true);
}

void dealias_in_place(FieldData& f) {
  auto s = Spectrum::of(f);
  s.apply_dealias_mask();
  s.to_real(f);
}

void truncate_modes_in_place(FieldData& f, int max_mode) {
  const int n = f.grid().n();
  if (max_mode < 1 || max_mode > n / 2) {
    throw ParameterError("truncate_modes: M must lie in [1, n/2], got " + std::to_string(max_mode));
  }
  f.require_finite("truncate_modes");
  if (max_mode == n / 2) return;
  auto s = Spectrum::of(f);
  s.truncate(max_mode);
  s.to_real(f);
}

void resample_into(const FieldData& src, FieldData& dst) {
  const auto& gs = src.grid();
  const auto& gd = dst.grid();
  if (gs.dim() != gd.dim() || src.components() != dst.components()) {
    throw GridMismatchError("resample: dimension or component mismatch");
  }
  if (gs.same_shape(gd)) {
    std::copy(src.data().begin(), src.data().end(), dst.data().begin());
    return;
  }
  const int keep = std::min(gs.n(), gd.n()) / 2;
  // Only modes strictly inside both Nyquist limits are transferred so the
  // result stays real.
  const auto sspec = Spectrum::of(src);
  Spectrum dspec(dst.grid_ptr(), dst.components());
  for (std::size_t m = 0; m < gd.spectral_size(); ++m) {
    const auto k = gd.wavenumber(m);
    bool inside = true;
    for (int a = 0; a < gd.dim(); ++a) {
      if (std::abs(k[a]) >= keep) inside = false;
    }
    if (!inside) continue;
    // Locate the same wavenumber on the source grid by direct index arithmetic.
    const int ns = gs.n();
    std::size_t ms = 0;
    for (int a = 0; a < gs.dim(); ++a) {
      const int extent = (a == gs.dim() - 1) ? ns / 2 + 1 : ns;
      const int j = (a == gs.dim() - 1) ? k[a] : (k[a] < 0 ? k[a] + ns : k[a]);
      ms = ms * static_cast<std::size_t>(extent) + static_cast<std::size_t>(j);
    }
    for (std::size_t c = 0; c < src.components(); ++c) {
      dspec.component(c)[m] = sspec.component(c)[ms];
    }
  }
  dspec.to_real(dst);
}

}  // namespace elsim
