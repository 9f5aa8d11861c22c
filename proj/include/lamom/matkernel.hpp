#ifndef LAMOM_MATKERNEL_HPP
#define LAMOM_MATKERNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "lamom/error.hpp"

namespace lamom {

using cdouble = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kHermTol = 1e-10;
inline constexpr long kDefaultDimLimit = 2048;

/// Full real spectrum of a Hermitian matrix, eigenvalues sorted descending.
/// Eigenvectors (orthonormal columns, same order) are filled on request.
struct HermitianSpectrum {
  Eigen::VectorXd eigenvalues;
  std::optional<ComplexMatrix> eigenvectors;
};

/// Largest absolute entry, zero for empty matrices.
double max_abs(const ComplexMatrix& m);

/// ||a - a^dagger||_max.
double hermiticity_residual(const ComplexMatrix& a);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

inline ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

HermitianSpectrum hermitian_eigen(const ComplexMatrix& a, double herm_tol = kHermTol,
                                  bool with_vectors = false);

double min_eigenvalue(const ComplexMatrix& a, double herm_tol = kHermTol);

/// Blockwise transpose of each dB x dB block of a (dA*dB) x (dA*dB) matrix:
/// composite entry ((i,j),(k,l)) moves to ((i,l),(k,j)).
ComplexMatrix partial_transpose(const ComplexMatrix& m, int dA, int dB);

/// Cyclic shift on k copies of a d-dimensional space, oriented so that
/// Tr[Pi (X1 (x) X2 (x) ... (x) Xk)] = Tr[X1 X2 ... Xk]:
/// Pi |l1, l2, ..., lk> = |l2, ..., lk, l1>.
ComplexMatrix cyclic_permutation_operator(int d, int k, long dim_limit = kDefaultDimLimit);

/// d^k with overflow/dim-limit guard; throws size_overflow beyond dim_limit.
long checked_pow_dim(int d, int k, long dim_limit);

}  // namespace lamom

#endif
