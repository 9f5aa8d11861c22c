#ifndef LAMOM_MAPS_HPP
#define LAMOM_MAPS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "lamom/matkernel.hpp"
#include "lamom/states.hpp"

namespace lamom {

/// Column-stacking vectorization, fixed project-wide: vec(X)[j*d+i] = X(i,j).
Eigen::VectorXcd vec(const ComplexMatrix& x);
ComplexMatrix unvec(const Eigen::VectorXcd& v, int d);

/// Hermiticity-preserving linear map on a d-dimensional system, stored as a
/// dense d^2 x d^2 superoperator acting on column-stacked operators.
/// Construction verifies hermiticity preservation and auto-detects a
/// trace-scaling constant c0 with Tr[L(X)] = c0 Tr[X] when one exists.
class PositiveMapSpec {
public:
  PositiveMapSpec(std::string name, int dim, ComplexMatrix superop,
                  std::string provenance = "user");

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const ComplexMatrix& superop() const { return superop_; }
  std::optional<double> trace_scale() const { return trace_scale_; }
  bool hermiticity_preserving() const { return true; }
  /// "builtin" (certified positive), "random" (positive by construction),
  /// or "user" (positivity only probed).
  const std::string& provenance() const { return provenance_; }

private:
  std::string name_;
  int dim_;
  ComplexMatrix superop_;
  std::optional<double> trace_scale_;
  std::string provenance_;
};

/// Build a superoperator from the map's action on matrix units.
ComplexMatrix superop_from_action(int d,
                                  const std::function<ComplexMatrix(const ComplexMatrix&)>& fn);

ComplexMatrix apply_map(const PositiveMapSpec& lam, const ComplexMatrix& x);

PositiveMapSpec identity_map(int d);
PositiveMapSpec transpose_map(int d);

/// Entrywise 3x3 map: off-diagonal entries negated, diagonal
/// [L(A)]_ii = a_ii + a_{i'i'} with i' = i+2 mod 3. Trace scale 2.
PositiveMapSpec lambda1_map();

/// Hilbert-Schmidt adjoint: Tr[L(A)^dag B] = Tr[A^dag L^dag(B)].
PositiveMapSpec adjoint_map(const PositiveMapSpec& lam);

/// transpose o Phi with Phi a seeded random Kraus CPTP map; positive and
/// generically not completely positive.
PositiveMapSpec random_positive_map(int d, int n_kraus, std::uint64_t seed);

/// (I_A (x) L)(m) for a (dA*dim) square matrix m, applied blockwise.
ComplexMatrix extend_apply_raw(const PositiveMapSpec& lam, const ComplexMatrix& m, int dA);
ComplexMatrix extend_and_apply(const PositiveMapSpec& lam, const DensityMatrix& rho);

/// (I (x) L)(rho) / Tr[(I (x) L)(rho)].
ComplexMatrix normalized_image_raw(const PositiveMapSpec& lam, const ComplexMatrix& m, int dA);
ComplexMatrix normalized_image(const PositiveMapSpec& lam, const DensityMatrix& rho);

/// (I (x) L)(|Omega><Omega|) with |Omega> = sum_i |ii> (unnormalized).
ComplexMatrix choi_matrix(const PositiveMapSpec& lam);

/// Minimum over seeded random pure inputs of the smallest eigenvalue of the
/// image; a negative return certifies non-positivity, a nonnegative return is
/// sampling evidence only.
double positivity_probe(const PositiveMapSpec& lam, int trials, std::uint64_t seed);

/// Built-ins addressable by name: "transpose", "lambda1", "identity".
std::optional<PositiveMapSpec> builtin_map(const std::string& name, int dim);

/// Map JSON: {"name": string, "dim": int, "superop": d^2 x d^2 array of
/// [re,im], "trace_scale": optional number}.
PositiveMapSpec map_from_json_text(const std::string& text);
std::string map_to_json_text(const PositiveMapSpec& lam);
PositiveMapSpec map_from_file(const std::string& path);

}  // namespace lamom

#endif
