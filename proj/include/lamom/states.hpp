#ifndef LAMOM_STATES_HPP
#define LAMOM_STATES_HPP

#include <string>

#include "lamom/matkernel.hpp"

namespace lamom {

struct BipartiteDims {
  int dA = 1;
  int dB = 1;
  int d() const { return dA * dB; }
  bool operator==(const BipartiteDims&) const = default;
};

/// Validated bipartite density matrix: Hermitian (1e-12), unit trace (1e-12),
/// eigenvalues >= -1e-10, finite entries.
class DensityMatrix {
public:
  DensityMatrix(BipartiteDims dims, ComplexMatrix mat, std::string label = "");

  const BipartiteDims& dims() const { return dims_; }
  const ComplexMatrix& mat() const { return mat_; }
  const std::string& label() const { return label_; }

  static constexpr double kHermResTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kPsdTol = -1e-10;

private:
  BipartiteDims dims_;
  ComplexMatrix mat_;
  std::string label_;
};

/// Horodecki 3x3 family: (2/7)|Psi+><Psi+| + (a/7) s+ + ((5-a)/7) s-,
/// s+ = (|01><01|+|12><12|+|20><20|)/3, s- = (|10><10|+|21><21|+|02><02|)/3.
/// Accepted range a in [2,5].
DensityMatrix horodecki_state(double a);

/// Projector onto (1/sqrt(d)) sum_i |ii>.
DensityMatrix max_entangled_state(int d);

DensityMatrix maximally_mixed(BipartiteDims dims);

/// State JSON: {"dA": int, "dB": int, "label": optional string,
///              "matrix": d x d array of [re, im]} (row-major, A-major index).
DensityMatrix state_from_json_text(const std::string& text);
std::string state_to_json_text(const DensityMatrix& rho);
DensityMatrix from_file(const std::string& path);
void to_file(const DensityMatrix& rho, const std::string& path);

}  // namespace lamom

#endif
