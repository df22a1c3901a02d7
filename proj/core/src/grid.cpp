#include "elsim/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <string>

#include "elsim/errors.hpp"

namespace elsim {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int& fft_threads() {
  static int threads = 1;
  return threads;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void set_fft_threads(int threads) {
  if (threads < 1) throw ParameterError("fft threads must be >= 1");
  std::lock_guard lock(planner_mutex());
  static const bool initialised = fftw_init_threads() != 0;
  if (!initialised) throw Error("fftw_init_threads failed");
  fft_threads() = threads;
  fftw_plan_with_nthreads(threads);
}

struct SpectralGrid::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

std::shared_ptr<const SpectralGrid> SpectralGrid::create(int dim, int n) {
  if (dim != 2 && dim != 3) {
    throw ParameterError("grid dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (n < 8 || !is_power_of_two(n)) {
    throw ParameterError("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  return std::make_shared<const SpectralGrid>(Token{}, dim, n);
}

SpectralGrid::SpectralGrid(Token, int dim, int n)
    : dim_(dim), n_(n), plans_(std::make_unique<Plans>()) {
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);
  spectral_size_ = size_ / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);

  for (int a = 0; a < dim; ++a) derivative_symbol_[a].resize(spectral_size_);
  k2_.resize(spectral_size_);
  kmax_.resize(spectral_size_);
  weight_.resize(spectral_size_);
  mask_.resize(spectral_size_);

  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t m = 0; m < spectral_size_; ++m) {
    const auto k = wavenumber(m);
    double k2 = 0.0;
    int kmax = 0;
    bool keep = true;
    for (int a = 0; a < dim; ++a) {
      const double ka = two_pi * k[a];
      derivative_symbol_[a][m] = (std::abs(k[a]) == n / 2) ? 0.0 : ka;
      k2 += ka * ka;
      kmax = std::max(kmax, std::abs(k[a]));
      if (3 * std::abs(k[a]) > n) keep = false;
    }
    k2_[m] = k2;
    kmax_[m] = kmax;
    mask_[m] = keep ? 1 : 0;
    const int last = k[dim - 1];
    weight_[m] = (last == 0 || last == n / 2) ? 1.0 : 2.0;
  }

  int dims[3] = {n, n, n};
  double* rbuf = fftw_alloc_real(size_);
  fftw_complex* cbuf = fftw_alloc_complex(spectral_size_);
  {
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans_->r2c = fftw_plan_dft_r2c(dim, dims, rbuf, cbuf, flags);
    plans_->c2r = fftw_plan_dft_c2r(dim, dims, cbuf, rbuf, flags);
  }
  fftw_free(rbuf);
  fftw_free(cbuf);
  if (!plans_->r2c || !plans_->c2r) throw Error("FFTW planning failed");
}

SpectralGrid::~SpectralGrid() = default;

std::array<int, 3> SpectralGrid::point_index(std::size_t p) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(p % static_cast<std::size_t>(n_));
    p /= static_cast<std::size_t>(n_);
  }
  return idx;
}

double SpectralGrid::coordinate(std::size_t p, int axis) const {
  return static_cast<double>(point_index(p)[axis]) / static_cast<double>(n_);
}

std::array<int, 3> SpectralGrid::wavenumber(std::size_t m) const {
  std::array<int, 3> k{0, 0, 0};
  const std::size_t half = static_cast<std::size_t>(n_ / 2 + 1);
  k[dim_ - 1] = static_cast<int>(m % half);
  m /= half;
  for (int a = dim_ - 2; a >= 0; --a) {
    const int j = static_cast<int>(m % static_cast<std::size_t>(n_));
    m /= static_cast<std::size_t>(n_);
    k[a] = j <= n_ / 2 ? j : j - n_;
  }
  return k;
}

std::span<const double> SpectralGrid::derivative_symbol(int axis) const {
  return derivative_symbol_.at(static_cast<std::size_t>(axis));
}
std::span<const double> SpectralGrid::wavenumber_squared() const { return k2_; }
std::span<const int> SpectralGrid::max_abs_wavenumber() const { return kmax_; }
std::span<const double> SpectralGrid::parseval_weight() const { return weight_; }
std::span<const unsigned char> SpectralGrid::dealias_mask() const { return mask_; }

void SpectralGrid::forward(std::span<const double> real, std::span<Complex> spectrum) const {
  if (real.size() != size_ || spectrum.size() != spectral_size_) {
    throw GridMismatchError("forward transform: buffer size mismatch");
  }
  // r2c leaves its input untouched for out-of-place transforms.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(real.data()),
                       reinterpret_cast<fftw_complex*>(spectrum.data()));
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& c : spectrum) c *= scale;
}

void SpectralGrid::inverse(std::span<const Complex> spectrum, std::span<double> real) const {
  if (real.size() != size_ || spectrum.size() != spectral_size_) {
    throw GridMismatchError("inverse transform: buffer size mismatch");
  }
  // c2r destroys its input.
  std::vector<Complex> scratch(spectrum.begin(), spectrum.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()),
                       real.data());
}

}  // namespace elsim
