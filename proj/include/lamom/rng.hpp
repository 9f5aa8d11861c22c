#ifndef LAMOM_RNG_HPP
#define LAMOM_RNG_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace lamom {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Uniform double in [0,1) with 53 random bits, independent of the standard
// library's distribution internals so sampled sequences are reproducible.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on uniform01 (again distribution-free).
inline double gaussian(Rng& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  while (u1 <= 1e-300) u1 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

inline Eigen::MatrixXcd gaussian_complex_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = std::complex<double>(gaussian(rng), gaussian(rng));
  return m;
}

inline Eigen::MatrixXcd random_hermitian(Rng& rng, int n) {
  Eigen::MatrixXcd g = gaussian_complex_matrix(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

inline Eigen::VectorXcd random_pure_state(Rng& rng, int d) {
  Eigen::VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = std::complex<double>(gaussian(rng), gaussian(rng));
  v.normalize();
  return v;
}

inline Eigen::VectorXd random_simplex_weights(Rng& rng, int n) {
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = -std::log(1.0 - uniform01(rng));
  w /= w.sum();
  return w;
}

}  // namespace lamom

#endif
