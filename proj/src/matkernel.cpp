#include "lamom/matkernel.hpp"

#include <sstream>

namespace lamom {

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(errc::not_square, "hermiticity residual requires a square matrix");
  }
  return max_abs(a - a.adjoint());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianSpectrum hermitian_eigen(const ComplexMatrix& a, double herm_tol, bool with_vectors) {
  if (a.rows() != a.cols()) {
    throw Error(errc::not_square, "hermitian_eigen: matrix is not square");
  }
  const double res = max_abs(a - a.adjoint());
  if (res > herm_tol) {
    std::ostringstream os;
    os << "hermitian_eigen: matrix is not Hermitian, residual " << res;
    throw Error(errc::not_hermitian, os.str(), res);
  }
  // Symmetrize so round-off in the input cannot leak into complex eigenvalues.
  ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      h, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  const Eigen::Index n = a.rows();

  HermitianSpectrum spec;
  spec.eigenvalues = solver.eigenvalues().reverse();
  if (with_vectors) {
    ComplexMatrix vecs(n, n);
    for (Eigen::Index i = 0; i < n; ++i) vecs.col(i) = solver.eigenvectors().col(n - 1 - i);
    spec.eigenvectors = std::move(vecs);
  }
  return spec;
}

double min_eigenvalue(const ComplexMatrix& a, double herm_tol) {
  HermitianSpectrum s = hermitian_eigen(a, herm_tol, false);
  return s.eigenvalues(s.eigenvalues.size() - 1);
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, int dA, int dB) {
  const Eigen::Index d = static_cast<Eigen::Index>(dA) * dB;
  if (dA < 1 || dB < 1 || m.rows() != d || m.cols() != d) {
    throw Error(errc::dimension_mismatch, "partial_transpose: matrix is not (dA*dB) square");
  }
  ComplexMatrix out(d, d);
  for (int i = 0; i < dA; ++i)
    for (int k = 0; k < dA; ++k)
      out.block(static_cast<Eigen::Index>(i) * dB, static_cast<Eigen::Index>(k) * dB, dB, dB) =
          m.block(static_cast<Eigen::Index>(i) * dB, static_cast<Eigen::Index>(k) * dB, dB, dB)
              .transpose();
  return out;
}

long checked_pow_dim(int d, int k, long dim_limit) {
  if (d < 1 || k < 1) {
    throw Error(errc::param_out_of_range, "dimension and copy count must be >= 1");
  }
  long dim = 1;
  for (int t = 0; t < k; ++t) {
    if (dim > dim_limit / d) {
      std::ostringstream os;
      os << "operator dimension " << d << "^" << k << " exceeds limit " << dim_limit;
      throw Error(errc::size_overflow, os.str());
    }
    dim *= d;
  }
  return dim;
}

ComplexMatrix cyclic_permutation_operator(int d, int k, long dim_limit) {
  const long dim = checked_pow_dim(d, k, dim_limit);
  ComplexMatrix pi = ComplexMatrix::Zero(dim, dim);
  std::vector<int> digits(k);
  for (long col = 0; col < dim; ++col) {
    long rem = col;
    for (int t = k - 1; t >= 0; --t) {
      digits[t] = static_cast<int>(rem % d);
      rem /= d;
    }
    // |l1,...,lk> -> |l2,...,lk,l1>
    long row = 0;
    for (int t = 1; t < k; ++t) row = row * d + digits[t];
    row = row * d + digits[0];
    pi(row, col) = 1.0;
  }
  return pi;
}

}  // namespace lamom
