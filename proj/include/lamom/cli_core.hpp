#ifndef LAMOM_CLI_CORE_HPP
#define LAMOM_CLI_CORE_HPP

#include <ostream>
#include <string>
#include <vector>

#include "lamom/moments.hpp"

namespace lamom {

/// One grid point of a Horodecki-family sweep: map moments, partial-transpose
/// moments and the three criterion margins H = q3 - q2^2, G = q3 - opt bound,
/// F = p3 - opt bound.
struct SweepRow {
  double a = 0.0;
  double q2 = 0.0, q3 = 0.0, H = 0.0, G = 0.0;
  double p2 = 0.0, p3 = 0.0, F = 0.0;
  bool det_q3 = false, det_q3o = false, det_ppt3o = false;
};

std::vector<SweepRow> horodecki_sweep(double from, double to, int steps,
                                      const PositiveMapSpec& lam);

/// Header: a,q2,q3,H,G,p2,p3,F,verdict_q3,verdict_q3o,verdict_ppt3o.
/// Verdict flags are 1 for EntanglementDetected, 0 otherwise.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Margin of one criterion ("q3", "q3o", "ppt3o") on the Horodecki state at a.
double criterion_margin(double a, const std::string& criterion, const PositiveMapSpec& lam);

/// Locate the margin sign change on [2,5] with a 61-point scan plus bisection
/// to width <= tol. Throws errc::infeasible when there is no sign change.
double find_threshold(const std::string& criterion, const PositiveMapSpec& lam, double tol);

}  // namespace lamom

#endif
