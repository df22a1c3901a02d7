#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace elsim {

using Complex = std::complex<double>;

/// Uniform periodic discretisation of the unit box [0,1)^dim with n points per
/// axis. Real arrays are row-major with the last axis fastest; spectral arrays
/// follow the real-to-complex half layout (last axis holds n/2+1 modes).
///
/// Spectral coefficients are normalised so that f(x) = sum_k fhat(k) e^{2 pi i k.x}.
class SpectralGrid {
  struct Token {};

 public:
  /// dim in {2, 3}; n a power of two, n >= 8. Throws ParameterError.
  static std::shared_ptr<const SpectralGrid> create(int dim, int n);

  SpectralGrid(Token, int dim, int n);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  int dim() const { return dim_; }
  int n() const { return n_; }
  std::size_t size() const { return size_; }
  std::size_t spectral_size() const { return spectral_size_; }

  /// Grid indices (i0, i1, i2) of real-space point p; unused axes are 0.
  std::array<int, 3> point_index(std::size_t p) const;
  /// Coordinate x_{axis} in [0, 1) of point p.
  double coordinate(std::size_t p, int axis) const;

  /// Integer wavenumber triple of spectral mode m (unused axes 0).
  std::array<int, 3> wavenumber(std::size_t m) const;
  /// 2 pi k_axis with the Nyquist mode zeroed (first-derivative symbol).
  std::span<const double> derivative_symbol(int axis) const;
  /// |2 pi k|^2 including Nyquist modes.
  std::span<const double> wavenumber_squared() const;
  /// max_j |k_j|.
  std::span<const int> max_abs_wavenumber() const;
  /// Multiplicity of each stored mode in a Parseval sum (1 or 2).
  std::span<const double> parseval_weight() const;
  /// Modes retained by the 2/3 rule: |k_j| <= n/3 on every axis.
  std::span<const unsigned char> dealias_mask() const;

  /// Forward transform of one real component, normalised by 1/size().
  void forward(std::span<const double> real, std::span<Complex> spectrum) const;
  /// Inverse transform; `spectrum` is not modified.
  void inverse(std::span<const Complex> spectrum, std::span<double> real) const;

  bool same_shape(const SpectralGrid& other) const {
    return dim_ == other.dim_ && n_ == other.n_;
  }

 private:
  struct Plans;

  int dim_;
  int n_;
  std::size_t size_;
  std::size_t spectral_size_;
  std::array<std::vector<double>, 3> derivative_symbol_;
  std::vector<double> k2_;
  std::vector<int> kmax_;
  std::vector<double> weight_;
  std::vector<unsigned char> mask_;
  std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Number of threads FFTW may use for plans created after this call.
void set_fft_threads(int threads);

}  // namespace elsim
