#ifndef LAMOM_MEASUREMENT_HPP
#define LAMOM_MEASUREMENT_HPP

#include <cstdint>
#include <vector>

#include "lamom/maps.hpp"
#include "lamom/matkernel.hpp"
#include "lamom/moments.hpp"
#include "lamom/states.hpp"

namespace lamom {

/// Hermitian observable on k copies of the bipartite space, in interleaved
/// copy order A1 B1 A2 B2 ..., so that its expectation against the plain
/// Kronecker power rho^(x)k equals the k-th map moment q_k.
struct MeasurementOperator {
  int k = 0;
  BipartiteDims dims;
  ComplexMatrix op;
  double norm_const = 1.0;  // c0^k divisor (hermitization 1/2 applied on top)
};

struct ShotEstimate {
  double mean = 0.0;
  double std_err = 0.0;  // sample standard deviation / sqrt(shots)
  long long shots = 0;
  std::uint64_t seed = 0;
};

/// (L^dag)^(x)k applied to the k-copy cyclic shift on the map's space.
ComplexMatrix twisted_permutation(const PositiveMapSpec& lam, int k,
                                  long dim_limit = kDefaultDimLimit);

/// Permutation matrix R with R|a1,b1,...,ak,bk> = |a1..ak, b1..bk>.
ComplexMatrix interleave_permutation(BipartiteDims dims, int k,
                                     long dim_limit = kDefaultDimLimit);

/// O = (V + V^dag) / (2 c0^k) with V = Pi_A (x) V_B reordered to interleaved
/// copy order. Requires a state-independent trace scale c0.
MeasurementOperator build_observable(const PositiveMapSpec& lam, BipartiteDims dims, int k,
                                     long dim_limit = kDefaultDimLimit);

/// Same assembly from externally supplied per-side operators. The two sides
/// must use the same cyclic-shift orientation; the adjoint of a consistent
/// pair is again consistent, so either orientation yields the identical O.
MeasurementOperator assemble_observable(const ComplexMatrix& v_a, const ComplexMatrix& v_b,
                                        double trace_scale, BipartiteDims dims, int k,
                                        long dim_limit = kDefaultDimLimit);

/// Single-copy observable W = I_A (x) L^dag(I_B): Tr[W rho] = Tr[(I (x) L)(rho)].
ComplexMatrix normalization_observable(const PositiveMapSpec& lam, BipartiteDims dims);

/// The 27x27 three-copy B-side operator for the entrywise 3x3 map, transcribed
/// from its explicit matrix-element sums (diagonal block, two-equal-index
/// block, and the negated all-distinct cycle).
ComplexMatrix lambda1_vb3_explicit();

/// Born-rule sampling of the observable on rho^(x)k with a seeded generator.
ShotEstimate born_sample(const MeasurementOperator& obs, const DensityMatrix& rho,
                         long long shots, std::uint64_t seed);

/// Feed shot-estimated second and third moments through the exact criterion
/// code path. Verdicts use the point estimates; the standard errors are
/// appended to the report details as a caveat.
std::vector<CriterionReport> criteria_from_shot_estimates(const ShotEstimate& q2_est,
                                                          const ShotEstimate& q3_est, int d);

}  // namespace lamom

#endif
