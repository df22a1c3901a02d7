#include "elsim/physics.hpp"

#include <algorithm>
#include <cmath>

#include "elsim/errors.hpp"
#include "elsim/spectral.hpp"

namespace elsim {

namespace {

std::size_t dim_of(const FieldData& f) { return static_cast<std::size_t>(f.grid().dim()); }

}  // namespace

FieldState FieldState::zeros(const GridPtr& grid, double time) {
  return FieldState{time, VectorField(grid, static_cast<std::size_t>(grid->dim())),
                    VectorField(grid, 3)};
}

ElModel::ElModel(LeslieCoefficients coeffs, ModelOptions options)
    : c_(coeffs), opts_(options) {
  if (!(c_.lambda1 < 0.0)) {
    throw RegimeError("Ericksen-Leslie model requires lambda1 < 0");
  }
  if (!(c_.epsilon > 0.0)) throw ParameterError("penalty scale epsilon must be positive");
}

void ElModel::truncate_product(FieldData& f) const {
  if (opts_.dealias) dealias_in_place(f);
}

VectorField ElModel::matvec(const TensorField& m, const VectorField& d) const {
  const std::size_t dim = dim_of(d);
  VectorField out(d.grid_ptr(), 3);
  for (std::size_t i = 0; i < dim; ++i) {
    auto o = out.component(i);
    for (std::size_t j = 0; j < dim; ++j) {
      const auto mij = m(i, j);
      const auto dj = d.component(j);
      for (std::size_t p = 0; p < o.size(); ++p) o[p] += mij[p] * dj[p];
    }
  }
  truncate_product(out);
  return out;
}

PenaltyTerms ElModel::penalty(const VectorField& d) const {
  d.require_finite("penalty");
  const double inv_eps2 = 1.0 / (c_.epsilon * c_.epsilon);
  const auto g = d.grid_ptr();

  ScalarField excess(g);  // |d|^2 - 1
  auto e = excess.values();
  for (std::size_t m = 0; m < d.components(); ++m) {
    const auto dm = d.component(m);
    for (std::size_t p = 0; p < e.size(); ++p) e[p] += dm[p] * dm[p];
  }
  for (auto& v : e) v -= 1.0;

  PenaltyTerms out{ScalarField(g), VectorField(g, d.components())};
  auto w = out.W_val.values();
  for (std::size_t p = 0; p < e.size(); ++p) w[p] = 0.25 * inv_eps2 * e[p] * e[p];

  truncate_product(excess);
  for (std::size_t m = 0; m < d.components(); ++m) {
    const auto dm = d.component(m);
    auto gm = out.gradW.component(m);
    for (std::size_t p = 0; p < e.size(); ++p) gm[p] = inv_eps2 * e[p] * dm[p];
  }
  truncate_product(out.gradW);
  return out;
}

TensorField ElModel::ericksen_stress(const TensorField& grad_d) const {
  const std::size_t dim = grad_d.rows();
  TensorField out(grad_d.grid_ptr(), dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      auto o = out(i, j);
      for (std::size_t m = 0; m < grad_d.cols(); ++m) {
        const auto a = grad_d(i, m);
        const auto b = grad_d(j, m);
        for (std::size_t p = 0; p < o.size(); ++p) o[p] += a[p] * b[p];
      }
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const auto src = out(j, i);
      std::copy(src.begin(), src.end(), out(i, j).begin());
    }
  }
  truncate_product(out);
  return out;
}

TensorField ElModel::assemble_stress(const VectorField& d, const TensorField& A,
                                     const VectorField& N, const VectorField& Ad,
                                     const ScalarField& dAd, bool include_viscous) const {
  const std::size_t dim = dim_of(d);
  const auto g = d.grid_ptr();

  // (d^T A d) d, one more dealiased stage before the outer product with d.
  VectorField e(g, 3);
  for (std::size_t m = 0; m < 3; ++m) {
    const auto dm = d.component(m);
    const auto s = dAd.values();
    auto em = e.component(m);
    for (std::size_t p = 0; p < em.size(); ++p) em[p] = s[p] * dm[p];
  }
  truncate_product(e);

  TensorField sigma(g, dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      auto o = sigma(i, j);
      const auto ei = e.component(i);
      const auto di = d.component(i);
      const auto dj = d.component(j);
      const auto ni = N.component(i);
      const auto nj = N.component(j);
      const auto ai = Ad.component(i);
      const auto aj = Ad.component(j);
      for (std::size_t p = 0; p < o.size(); ++p) {
        o[p] = c_.mu1 * ei[p] * dj[p] + c_.mu2 * ni[p] * dj[p] + c_.mu3 * di[p] * nj[p] +
               c_.mu5 * ai[p] * dj[p] + c_.mu6 * di[p] * aj[p];
      }
    }
  }
  truncate_product(sigma);
  if (include_viscous) sigma.axpy(c_.mu4, A);
  return sigma;
}

TensorField ElModel::leslie_stress(const VectorField& d, const TensorField& A,
                                   const VectorField& N, bool include_viscous) const {
  if (d.components() != 3 || N.components() != 3) {
    throw GridMismatchError("leslie_stress: d and N must have three components");
  }
  if (A.rows() != dim_of(d) || A.cols() != dim_of(d)) {
    throw GridMismatchError("leslie_stress: A must be dim x dim");
  }
  const auto Ad = matvec(A, d);
  ScalarField dAd(d.grid_ptr());
  auto s = dAd.values();
  for (std::size_t i = 0; i < 3; ++i) {
    const auto di = d.component(i);
    const auto ai = Ad.component(i);
    for (std::size_t p = 0; p < s.size(); ++p) s[p] += di[p] * ai[p];
  }
  truncate_product(dAd);
  return assemble_stress(d, A, N, Ad, dAd, include_viscous);
}

TensorField ElModel::leslie_stress(const FieldState& s, const ConstitutiveBundle& b) const {
  return assemble_stress(s.d, b.A, b.N, b.Ad, b.dAd, true);
}

ConstitutiveBundle ElModel::bundle(const FieldState& s) const {
  s.u.require_finite("state velocity");
  s.d.require_finite("state director");
  if (s.d.components() != 3 || s.u.components() != dim_of(s.u)) {
    throw GridMismatchError("state: u needs dim components and d three");
  }
  if (!s.u.grid().same_shape(s.d.grid())) throw GridMismatchError("state: u and d grids differ");

  const auto g = s.u.grid_ptr();
  const std::size_t dim = dim_of(s.u);

  auto grad_u = gradient(s.u);
  auto gradT = grad_u.transpose();
  auto A = grad_u;
  A += gradT;
  A *= 0.5;
  auto omega = grad_u;
  omega -= gradT;
  omega *= 0.5;

  const auto dspec = Spectrum::of(s.d);
  TensorField grad_d(g, dim, 3);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t m = 0; m < 3; ++m) dspec.derivative(m, static_cast<int>(i), grad_d(i, m));
  }
  VectorField lap_d(g, 3);
  {
    auto lspec = dspec;
    const auto k2 = g->wavenumber_squared();
    for (std::size_t m = 0; m < 3; ++m) {
      auto c = lspec.component(m);
      for (std::size_t q = 0; q < c.size(); ++q) c[q] *= -k2[q];
    }
    lspec.to_real(lap_d);
  }

  auto pen = penalty(s.d);
  VectorField h = lap_d;
  h -= pen.gradW;

  auto Ad = matvec(A, s.d);
  auto omega_d = matvec(omega, s.d);

  VectorField N(g, 3);
  N.axpy(-c_.lambda2 / c_.lambda1, Ad);
  N.axpy(-1.0 / c_.lambda1, h);

  ScalarField dAd(g);
  {
    auto v = dAd.values();
    for (std::size_t i = 0; i < dim; ++i) {
      const auto di = s.d.component(i);
      const auto ai = Ad.component(i);
      for (std::size_t p = 0; p < v.size(); ++p) v[p] += di[p] * ai[p];
    }
    truncate_product(dAd);
  }

  auto sigma = assemble_stress(s.d, A, N, Ad, dAd, true);
  auto ericksen = ericksen_stress(grad_d);

  return ConstitutiveBundle{std::move(grad_u), std::move(A),       std::move(omega),
                            std::move(grad_d), std::move(lap_d),   std::move(pen.W_val),
                            std::move(pen.gradW), std::move(h),    std::move(Ad),
                            std::move(omega_d), std::move(N),      std::move(dAd),
                            std::move(sigma),  std::move(ericksen)};
}

VectorField ElModel::transport_N(const FieldState& s) const { return bundle(s).N; }

DirectorRhs ElModel::director_rhs(const FieldState& s) const { return director_rhs(s, bundle(s)); }

DirectorRhs ElModel::director_rhs(const FieldState& s, const ConstitutiveBundle& b) const {
  const auto g = s.d.grid_ptr();
  const std::size_t dim = dim_of(s.d);

  VectorField advection(g, 3);  // (u.grad) d
  for (std::size_t m = 0; m < 3; ++m) {
    auto a = advection.component(m);
    for (std::size_t i = 0; i < dim; ++i) {
      const auto ui = s.u.component(i);
      const auto gim = b.grad_d(i, m);
      for (std::size_t p = 0; p < a.size(); ++p) a[p] += ui[p] * gim[p];
    }
  }
  truncate_product(advection);

  VectorField expl = b.omega_d;
  expl -= advection;
  expl.axpy(-c_.lambda2 / c_.lambda1, b.Ad);
  expl.axpy(1.0 / c_.lambda1, b.gradW);

  VectorField diffusion = b.lap_d;
  diffusion *= director_diffusivity();

  VectorField total = expl;
  total += diffusion;
  return DirectorRhs{std::move(expl), std::move(diffusion), std::move(total),
                     director_diffusivity()};
}

VectorField ElModel::r_laplacian(const TensorField& grad_u, double r) const {
  const auto g = grad_u.grid_ptr();
  ScalarField factor(g);
  auto q = factor.values();
  for (std::size_t c = 0; c < grad_u.components(); ++c) {
    const auto v = grad_u.component(c);
    for (std::size_t p = 0; p < q.size(); ++p) q[p] += v[p] * v[p];
  }
  if (r != 4.0) {
    const double e = 0.5 * (r - 2.0);
    for (auto& v : q) v = std::pow(v, e);
  }
  truncate_product(factor);

  TensorField flux(g, grad_u.rows(), grad_u.cols());
  for (std::size_t c = 0; c < grad_u.components(); ++c) {
    const auto v = grad_u.component(c);
    auto o = flux.component(c);
    for (std::size_t p = 0; p < o.size(); ++p) o[p] = q[p] * v[p];
  }
  truncate_product(flux);
  return divergence(flux);
}

VectorField ElModel::momentum_force(const FieldState& s, const ConstitutiveBundle& b,
                                    const std::optional<Regularization>& reg) const {
  const auto g = s.u.grid_ptr();
  const std::size_t dim = dim_of(s.u);

  const VectorField transporter = reg ? truncate_modes(s.u, reg->max_mode) : s.u;

  VectorField advection(g, dim);  // (w.grad) u
  for (std::size_t j = 0; j < dim; ++j) {
    auto a = advection.component(j);
    for (std::size_t i = 0; i < dim; ++i) {
      const auto wi = transporter.component(i);
      const auto gij = b.grad_u(i, j);
      for (std::size_t p = 0; p < a.size(); ++p) a[p] += wi[p] * gij[p];
    }
  }
  truncate_product(advection);

  if (opts_.skew_symmetric_advection) {
    TensorField flux(g, dim, dim);  // w (x) u
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        auto o = flux(i, j);
        const auto wi = transporter.component(i);
        const auto uj = s.u.component(j);
        for (std::size_t p = 0; p < o.size(); ++p) o[p] = wi[p] * uj[p];
      }
    }
    truncate_product(flux);
    advection *= 0.5;
    advection.axpy(0.5, divergence(flux));
  }

  TensorField sigma_rest = b.sigma;
  sigma_rest.axpy(-c_.mu4, b.A);

  VectorField force = divergence(sigma_rest);
  force -= divergence(b.ericksen);
  force -= advection;

  if (reg) force.axpy(1.0 / reg->max_mode, r_laplacian(b.grad_u, reg->r));

  // Every term is a divergence, so the mean is zero up to rounding.
  for (std::size_t j = 0; j < dim; ++j) {
    auto f = force.component(j);
    const double avg = mean(f);
    for (auto& v : f) v -= avg;
  }
  return force;
}

MomentumRhs ElModel::momentum_rhs(const FieldState& s,
                                  const std::optional<Regularization>& reg) const {
  return momentum_rhs(s, bundle(s), reg);
}

MomentumRhs ElModel::momentum_rhs(const FieldState& s, const ConstitutiveBundle& b,
                                  const std::optional<Regularization>& reg) const {
  auto expl = leray_project(momentum_force(s, b, reg));
  auto viscous = laplacian(s.u);
  viscous *= viscosity();
  VectorField total = expl;
  total += viscous;
  return MomentumRhs{std::move(expl), std::move(viscous), std::move(total), viscosity()};
}

}  // namespace elsim
