#include "lamom/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "lamom/rng.hpp"

namespace lamom {

namespace {

// Apply a superoperator to tensor factor t (0-based) of an operator on k
// copies of a d-dimensional space: Y[.. i ..][.. j ..] =
//   sum_{a,b} S[j*d+i, b*d+a] X[.. a ..][.. b ..].
ComplexMatrix apply_superop_to_factor(const ComplexMatrix& m, const ComplexMatrix& s, int d,
                                      int k, int t) {
  const long dim = m.rows();
  long stride = 1;
  for (int u = k - 1; u > t; --u) stride *= d;

  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (long row = 0; row < dim; ++row) {
    const int i = static_cast<int>((row / stride) % d);
    const long row0 = row - i * stride;
    for (long col = 0; col < dim; ++col) {
      const int j = static_cast<int>((col / stride) % d);
      const long col0 = col - j * stride;
      cdouble acc = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          acc += s(j * d + i, b * d + a) * m(row0 + a * stride, col0 + b * stride);
      out(row, col) = acc;
    }
  }
  return out;
}

}  // namespace

ComplexMatrix twisted_permutation(const PositiveMapSpec& lam, int k, long dim_limit) {
  const int d = lam.dim();
  checked_pow_dim(d, k, dim_limit);
  ComplexMatrix m = cyclic_permutation_operator(d, k, dim_limit);
  const ComplexMatrix s_adj = lam.superop().adjoint();
  for (int t = 0; t < k; ++t) m = apply_superop_to_factor(m, s_adj, d, k, t);
  return m;
}

ComplexMatrix interleave_permutation(BipartiteDims dims, int k, long dim_limit) {
  const int dA = dims.dA, dB = dims.dB;
  const long dim = checked_pow_dim(dims.d(), k, dim_limit);
  ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
  std::vector<int> a(k), b(k);
  for (long idx = 0; idx < dim; ++idx) {
    long rem = idx;
    for (int t = k - 1; t >= 0; --t) {
      const int pair = static_cast<int>(rem % (static_cast<long>(dA) * dB));
      a[t] = pair / dB;
      b[t] = pair % dB;
      rem /= static_cast<long>(dA) * dB;
    }
    long ga = 0, gb = 0;
    for (int t = 0; t < k; ++t) {
      ga = ga * dA + a[t];
      gb = gb * dB + b[t];
    }
    long bpow = 1;
    for (int t = 0; t < k; ++t) bpow *= dB;
    r(ga * bpow + gb, idx) = 1.0;
  }
  return r;
}

MeasurementOperator assemble_observable(const ComplexMatrix& v_a, const ComplexMatrix& v_b,
                                        double trace_scale, BipartiteDims dims, int k,
                                        long dim_limit) {
  const long dim = checked_pow_dim(dims.d(), k, dim_limit);
  if (v_a.rows() != v_a.cols() || v_b.rows() != v_b.cols() ||
      v_a.rows() * v_b.rows() != dim) {
    throw Error(errc::dimension_mismatch, "assemble_observable: per-side operator sizes");
  }
  ComplexMatrix v_grouped = kron(v_a, v_b);
  ComplexMatrix r = interleave_permutation(dims, k, dim_limit);
  ComplexMatrix v = r.adjoint() * v_grouped * r;

  double c_pow = 1.0;
  for (int t = 0; t < k; ++t) c_pow *= trace_scale;

  MeasurementOperator obs;
  obs.k = k;
  obs.dims = dims;
  obs.norm_const = c_pow;
  obs.op = (v + v.adjoint()) / (2.0 * c_pow);
  return obs;
}

MeasurementOperator build_observable(const PositiveMapSpec& lam, BipartiteDims dims, int k,
                                     long dim_limit) {
  if (lam.dim() != dims.dB) {
    throw Error(errc::dimension_mismatch, "build_observable: map does not act on subsystem B");
  }
  if (!lam.trace_scale()) {
    throw Error(errc::no_trace_scale,
                "build_observable: map '" + lam.name() +
                    "' has no state-independent trace scale; measure the normalization "
                    "observable separately");
  }
  return assemble_observable(cyclic_permutation_operator(dims.dA, k, dim_limit),
                             twisted_permutation(lam, k, dim_limit), *lam.trace_scale(), dims,
                             k, dim_limit);
}

ComplexMatrix normalization_observable(const PositiveMapSpec& lam, BipartiteDims dims) {
  if (lam.dim() != dims.dB) {
    throw Error(errc::dimension_mismatch, "normalization_observable: map dimension mismatch");
  }
  PositiveMapSpec adj = adjoint_map(lam);
  ComplexMatrix w_b = apply_map(adj, ComplexMatrix::Identity(dims.dB, dims.dB));
  return kron(ComplexMatrix::Identity(dims.dA, dims.dA), w_b);
}

ComplexMatrix lambda1_vb3_explicit() {
  auto idx = [](int a, int b, int c) { return 9 * a + 3 * b + c; };
  ComplexMatrix m = ComplexMatrix::Zero(27, 27);

  for (int j = 0; j < 3; ++j) {
    const int jp = (j + 2) % 3;
    const int choice[2] = {j, jp};
    for (int s1 : choice)
      for (int s2 : choice)
        for (int s3 : choice) m(idx(s1, s2, s3), idx(s1, s2, s3)) += 1.0;
  }

  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l) {
      if (j == l) continue;
      const int jp = (j + 2) % 3;
      const int lp = (l + 2) % 3;
      m(idx(j, j, l), idx(j, l, j)) += 1.0;
      m(idx(jp, j, l), idx(jp, l, j)) += 1.0;
      m(idx(j, l, l), idx(l, l, j)) += 1.0;
      m(idx(j, lp, l), idx(l, lp, j)) += 1.0;
      m(idx(j, l, j), idx(l, j, j)) += 1.0;
      m(idx(j, l, jp), idx(l, j, jp)) += 1.0;
    }
  }

  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      for (int v = 0; v < 3; ++v) {
        if (j == l || l == v || j == v) continue;
        m(idx(j, l, v), idx(l, v, j)) -= 1.0;
      }
  return m;
}

ShotEstimate born_sample(const MeasurementOperator& obs, const DensityMatrix& rho,
                         long long shots, std::uint64_t seed) {
  if (shots < 1) throw Error(errc::param_out_of_range, "born_sample: shots must be >= 1");
  if (!(rho.dims() == obs.dims)) {
    throw Error(errc::dimension_mismatch, "born_sample: state does not match observable dims");
  }

  ComplexMatrix power = rho.mat();
  for (int t = 1; t < obs.k; ++t) power = kron(power, rho.mat());

  HermitianSpectrum spec = hermitian_eigen(obs.op, 1e-9, true);
  const Eigen::Index n = spec.eigenvalues.size();
  const ComplexMatrix& v = *spec.eigenvectors;

  Eigen::VectorXd probs(n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = std::max(0.0, (v.col(i).adjoint() * power * v.col(i))(0, 0).real());
    probs(i) = p;
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(errc::probability_defect, "born_sample: outcome probabilities do not sum to 1",
                std::abs(total - 1.0));
  }
  probs /= total;

  std::vector<double> cumulative(n);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += probs(i);
    cumulative[i] = acc;
  }
  cumulative[n - 1] = 1.0;

  Rng rng = make_rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (long long s = 0; s < shots; ++s) {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const Eigen::Index i = it - cumulative.begin();
    const double w = spec.eigenvalues(std::min(i, n - 1));
    sum += w;
    sum_sq += w * w;
  }

  ShotEstimate est;
  est.shots = shots;
  est.seed = seed;
  est.mean = sum / shots;
  double var = 0.0;
  if (shots > 1) var = std::max(0.0, (sum_sq - shots * est.mean * est.mean) / (shots - 1));
  est.std_err = std::sqrt(var / shots);
  return est;
}

std::vector<CriterionReport> criteria_from_shot_estimates(const ShotEstimate& q2_est,
                                                          const ShotEstimate& q3_est, int d) {
  MomentVector mv;
  mv.d = d;
  mv.q = {static_cast<double>(d), 1.0, q2_est.mean, q3_est.mean};

  std::ostringstream caveat;
  caveat << "; shot-estimated q2 +/- " << q2_est.std_err << " (" << q2_est.shots
         << " shots), q3 +/- " << q3_est.std_err << " (" << q3_est.shots << " shots)";

  std::vector<CriterionReport> reports;
  reports.push_back(q3_criterion(mv));
  reports.push_back(q3_optimized_criterion(mv));
  reports.push_back(hankel_criterion(mv));
  for (CriterionReport& r : reports) r.detail += caveat.str();
  return reports;
}

}  // namespace lamom
