#ifndef LAMOM_MOMENTS_HPP
#define LAMOM_MOMENTS_HPP

#include <string>
#include <vector>

#include "lamom/maps.hpp"
#include "lamom/matkernel.hpp"
#include "lamom/states.hpp"

namespace lamom {

/// Power-trace moments (q0, q1, ..., q_maxk) of a normalized map image.
/// q0 is the numerical rank: #{ |lambda_i| > rank_tol * max(1, max|lambda|) }.
struct MomentVector {
  std::vector<double> q;
  int d = 0;
  double rank_tol = 1e-10;

  int max_k() const { return static_cast<int>(q.size()) - 1; }
};

struct HankelMatrix {
  int l = 0;
  Eigen::MatrixXd mat;  // (l+1) x (l+1), [mat]_ij = q_{i+j+1}
};

enum class Verdict { SeparabilityConsistent, EntanglementDetected };

std::string verdict_to_string(Verdict v);

struct CriterionReport {
  std::string criterion_id;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // value - bound; detection iff margin < -report_tol
  Verdict verdict = Verdict::SeparabilityConsistent;
  std::string detail;
};

inline constexpr double kReportTol = 1e-9;

CriterionReport make_report(std::string id, double value, double bound, std::string detail,
                            double report_tol = kReportTol);

struct OptimalBoundParams {
  int alpha = 0;
  double x = 0.0;
  double bound = 0.0;
};

MomentVector moments_of(const ComplexMatrix& theta, double rank_tol = 1e-10, int max_k = -1);

HankelMatrix hankel(const MomentVector& q, int l);

/// Checks B_l >= 0 for l = 1 .. floor((d-1)/2); tolerance is psd_tol scaled by
/// the largest |entry| of each B_l.
CriterionReport hankel_criterion(const MomentVector& q, double psd_tol = 1e-9);

/// q3 >= q2^2.
CriterionReport q3_criterion(const MomentVector& q);

/// Optimized third-moment lower bound for separable states:
/// q3 >= alpha x^3 + (1 - alpha x)^3, alpha = floor(1/q2),
/// x = [alpha + sqrt(alpha((alpha+1) q2 - 1))] / [alpha (alpha+1)].
OptimalBoundParams q3_optimal_bound(double q2);

CriterionReport q3_optimized_criterion(const MomentVector& q);

/// Independent numeric minimizer of sum lambda_i^3 subject to
/// sum lambda_i = 1, sum lambda_i^2 = q2, lambda sorted nonnegative:
/// exact enumeration of (x * m, y, 0...) profiles plus seeded random-restart
/// projected local searches.
struct Q3MinResult {
  double value = 0.0;
  Eigen::VectorXd argmin;  // sorted descending
};
Q3MinResult oracle_q3_min_solution(double q2, int d, int restarts = 200);
double oracle_q3_min(double q2, int d);

/// || B_l - V_l D V_l^T ||_max with V_l the (l+1) x d eigenvalue power matrix.
double vandermonde_check(const MomentVector& q, const HermitianSpectrum& spectrum, int l);

/// Runs q3, optimized q3 and Hankel criteria on the map image, then the same
/// three on the partial-transpose image. criterion_ids:
/// q3_lambda, q3_opt, hankel, pt_q3_lambda, pt_q3_opt, pt_hankel.
std::vector<CriterionReport> full_report(const DensityMatrix& rho, const PositiveMapSpec& lam);

/// 12-significant-digit rounding used for all floating JSON output.
double round12(double x);
std::string reports_to_json_text(const std::vector<CriterionReport>& reports);

}  // namespace lamom

#endif
