#include "lamom/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lamom/rng.hpp"

namespace lamom {

std::string verdict_to_string(Verdict v) {
  return v == Verdict::EntanglementDetected ? "EntanglementDetected" : "SeparabilityConsistent";
}

CriterionReport make_report(std::string id, double value, double bound, std::string detail,
                            double report_tol) {
  CriterionReport r;
  r.criterion_id = std::move(id);
  r.value = value;
  r.bound = bound;
  r.margin = value - bound;
  r.verdict = r.margin < -report_tol ? Verdict::EntanglementDetected
                                     : Verdict::SeparabilityConsistent;
  r.detail = std::move(detail);
  return r;
}

MomentVector moments_of(const ComplexMatrix& theta, double rank_tol, int max_k) {
  if (theta.rows() != theta.cols()) {
    throw Error(errc::not_square, "moments_of: matrix is not square");
  }
  const int d = static_cast<int>(theta.rows());
  if (max_k < 0) max_k = d;
  if (max_k > d) {
    throw Error(errc::param_out_of_range, "moments_of: max_k exceeds matrix dimension");
  }
  const double herm = max_abs(theta - theta.adjoint());
  if (herm > 1e-9) {
    throw Error(errc::not_hermitian, "moments_of: matrix is not Hermitian", herm);
  }
  const double tr_res = std::abs(theta.trace() - cdouble(1.0, 0.0));
  if (tr_res > 1e-9) {
    std::ostringstream os;
    os << "moments_of: trace deviates from 1 by " << tr_res;
    throw Error(errc::bad_trace, os.str(), tr_res);
  }

  HermitianSpectrum spec = hermitian_eigen(theta, 1e-8);
  MomentVector mv;
  mv.d = d;
  mv.rank_tol = rank_tol;
  mv.q.assign(max_k + 1, 0.0);

  const double cutoff = rank_tol * std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
  int rank = 0;
  for (int i = 0; i < d; ++i)
    if (std::abs(spec.eigenvalues(i)) > cutoff) ++rank;
  mv.q[0] = rank;

  Eigen::VectorXd power = Eigen::VectorXd::Ones(d);
  for (int k = 1; k <= max_k; ++k) {
    power = power.cwiseProduct(spec.eigenvalues);
    mv.q[k] = power.sum();
  }
  return mv;
}

HankelMatrix hankel(const MomentVector& q, int l) {
  if (l < 1) throw Error(errc::param_out_of_range, "hankel: order l must be >= 1");
  if (2 * l + 1 > q.d || 2 * l + 1 > q.max_k()) {
    throw Error(errc::order_too_large, "hankel: 2l+1 exceeds available moments");
  }
  HankelMatrix b;
  b.l = l;
  b.mat.resize(l + 1, l + 1);
  for (int i = 0; i <= l; ++i)
    for (int j = 0; j <= l; ++j) b.mat(i, j) = q.q[i + j + 1];
  return b;
}

CriterionReport hankel_criterion(const MomentVector& q, double psd_tol) {
  if (q.d < 3) throw Error(errc::param_out_of_range, "hankel_criterion: requires d >= 3");
  const int l_max = std::min((q.d - 1) / 2, (q.max_k() - 1) / 2);

  int failing_l = -1;
  double failing_ev = 0.0, failing_scale = 1.0;
  double global_min_ev = std::numeric_limits<double>::infinity();
  double global_scale = 1.0;
  for (int l = 1; l <= l_max; ++l) {
    HankelMatrix b = hankel(q, l);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.mat, Eigen::EigenvaluesOnly);
    const double min_ev = es.eigenvalues()(0);
    const double scale = std::max(1.0, b.mat.cwiseAbs().maxCoeff());
    if (min_ev < global_min_ev) {
      global_min_ev = min_ev;
      global_scale = scale;
    }
    if (failing_l < 0 && min_ev < -psd_tol * scale) {
      failing_l = l;
      failing_ev = min_ev;
      failing_scale = scale;
    }
  }

  std::ostringstream detail;
  double value, tol;
  if (failing_l >= 0) {
    value = failing_ev;
    tol = psd_tol * failing_scale;
    detail << "B_" << failing_l << " has eigenvalue " << failing_ev;
  } else {
    value = global_min_ev;
    tol = psd_tol * global_scale;
    detail << "B_l >= 0 for l=1.." << l_max << " (min eigenvalue " << global_min_ev << ")";
  }
  return make_report("hankel", value, 0.0, detail.str(), tol);
}

CriterionReport q3_criterion(const MomentVector& q) {
  if (q.d < 3 || q.max_k() < 3) {
    throw Error(errc::param_out_of_range, "q3_criterion: requires d >= 3 and q3");
  }
  std::ostringstream detail;
  detail << "q3 vs q2^2 with q2=" << q.q[2];
  return make_report("q3_lambda", q.q[3], q.q[2] * q.q[2], detail.str());
}

OptimalBoundParams q3_optimal_bound(double q2) {
  if (!(q2 > 0.0) || q2 > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "q3_optimal_bound: q2=" << q2 << " outside (0, 1]";
    throw Error(errc::q2_out_of_range, os.str());
  }
  const double q2c = std::min(q2, 1.0);
  // +1e-12 guard keeps exact integer 1/q2 from dropping one level by round-off.
  const int alpha = static_cast<int>(std::floor(1.0 / q2c + 1e-12));
  const double disc = std::max(0.0, alpha * ((alpha + 1) * q2c - 1.0));
  OptimalBoundParams p;
  p.alpha = alpha;
  p.x = (alpha + std::sqrt(disc)) / (static_cast<double>(alpha) * (alpha + 1));
  const double rest = 1.0 - alpha * p.x;
  p.bound = alpha * p.x * p.x * p.x + rest * rest * rest;
  return p;
}

CriterionReport q3_optimized_criterion(const MomentVector& q) {
  if (q.d < 3 || q.max_k() < 3) {
    throw Error(errc::param_out_of_range, "q3_optimized_criterion: requires d >= 3 and q3");
  }
  const double q2 = q.q[2];
  if (q2 > 1.0 + 1e-12) {
    std::ostringstream detail;
    detail << "q2 exceeds separable range (q2=" << q2 << ")";
    return make_report("q3_opt", 1.0 - q2, 0.0, detail.str(), 1e-12);
  }
  OptimalBoundParams p = q3_optimal_bound(q2);
  std::ostringstream detail;
  detail << "alpha=" << p.alpha << " x=" << p.x;
  return make_report("q3_opt", q.q[3], p.bound, detail.str());
}

namespace {

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd lambda;
};

void consider(Candidate& best, const Eigen::VectorXd& lam, double q2) {
  // Accept only points that actually satisfy the constraints.
  if ((lam.array() < -1e-12).any()) return;
  if (std::abs(lam.sum() - 1.0) > 1e-9) return;
  if (std::abs(lam.squaredNorm() - q2) > 1e-9) return;
  const double value = lam.array().cube().sum();
  if (value < best.value) {
    best.value = value;
    best.lambda = lam;
    std::sort(best.lambda.data(), best.lambda.data() + best.lambda.size(),
              std::greater<double>());
  }
}

// Enumerate profiles (x repeated m, y, 0...) solving mx+y=1, mx^2+y^2=q2.
void enumerate_profiles(Candidate& best, double q2, int d) {
  for (int m = 1; m <= d - 1; ++m) {
    const double disc = m * ((m + 1) * q2 - 1.0);
    if (disc < -1e-13) continue;
    const double root = std::sqrt(std::max(0.0, disc));
    for (const double sgn : {1.0, -1.0}) {
      const double x = (m + sgn * root) / (static_cast<double>(m) * (m + 1));
      const double y = 1.0 - m * x;
      if (x < -1e-12 || y < -1e-12) continue;
      Eigen::VectorXd lam = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < m; ++i) lam(i) = std::max(0.0, x);
      lam(m) = std::max(0.0, y);
      consider(best, lam, q2);
    }
  }
}

// Rescale lam on its support via lam -> a*lam + b so that both moment
// constraints hold. Returns false when the support cannot carry q2.
bool reproject(Eigen::VectorXd& lam, double q2) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    double s = 0.0, t = 0.0, qq = 0.0;
    for (int i = 0; i < lam.size(); ++i) {
      if (lam(i) > 0.0) {
        s += 1.0;
        t += lam(i);
        qq += lam(i) * lam(i);
      }
    }
    if (s < 1.5) return false;
    const double var = qq - t * t / s;
    const double need = q2 - 1.0 / s;
    if (var <= 1e-16 || need < 0.0) return false;
    const double a = std::sqrt(need / var);
    const double b = (1.0 - a * t) / s;
    bool clipped = false;
    for (int i = 0; i < lam.size(); ++i) {
      if (lam(i) > 0.0) {
        lam(i) = a * lam(i) + b;
        if (lam(i) < 0.0) {
          lam(i) = 0.0;
          clipped = true;
        }
      }
    }
    if (!clipped) return true;
  }
  return false;
}

void local_search(Candidate& best, double q2, int d, Rng& rng) {
  Eigen::VectorXd lam = random_simplex_weights(rng, d);
  if (!reproject(lam, q2)) return;
  consider(best, lam, q2);

  for (int iter = 0; iter < 200; ++iter) {
    // Project the gradient of sum lambda^3 onto the tangent space of the two
    // equality constraints, restricted to the open support.
    Eigen::VectorXd g = (3.0 * lam.array().square()).matrix();
    double s = 0.0, t = 0.0, qq = 0.0, gs = 0.0, gl = 0.0;
    for (int i = 0; i < d; ++i) {
      if (lam(i) > 0.0) {
        s += 1.0;
        t += lam(i);
        qq += lam(i) * lam(i);
        gs += g(i);
        gl += g(i) * lam(i);
      }
    }
    if (s < 2.5) break;  // support of size <= 2 is fully pinned by constraints
    const double det = s * qq - t * t;
    if (det <= 1e-16) break;
    const double ca = (gs * qq - gl * t) / det;
    const double cb = (gl * s - gs * t) / det;
    double gmax = 0.0;
    for (int i = 0; i < d; ++i) {
      g(i) = lam(i) > 0.0 ? g(i) - ca - cb * lam(i) : 0.0;
      gmax = std::max(gmax, std::abs(g(i)));
    }
    if (gmax < 1e-13) break;
    const double step = 0.1 / (1.0 + iter / 40.0) * std::max(1.0 / d, lam.maxCoeff()) / gmax;
    Eigen::VectorXd next = lam - step * g;
    next = next.cwiseMax(0.0);
    if (!reproject(next, q2)) break;
    lam = next;
    consider(best, lam, q2);
  }
}

}  // namespace

Q3MinResult oracle_q3_min_solution(double q2, int d, int restarts) {
  if (d < 2) throw Error(errc::param_out_of_range, "oracle_q3_min: d must be >= 2");
  if (q2 < 1.0 / d - 1e-9 || q2 > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "oracle_q3_min: no feasible spectrum with q2=" << q2 << ", d=" << d;
    throw Error(errc::infeasible, os.str());
  }
  const double q2c = std::clamp(q2, 1.0 / d, 1.0);
  Candidate best;
  enumerate_profiles(best, q2c, d);
  Rng rng = make_rng(0xA11CE5EEDULL);
  for (int r = 0; r < restarts; ++r) local_search(best, q2c, d, rng);
  if (!std::isfinite(best.value)) {
    throw Error(errc::infeasible, "oracle_q3_min: no feasible profile found");
  }
  Q3MinResult res;
  res.value = best.value;
  res.argmin = best.lambda;
  return res;
}

double oracle_q3_min(double q2, int d) { return oracle_q3_min_solution(q2, d).value; }

double vandermonde_check(const MomentVector& q, const HermitianSpectrum& spectrum, int l) {
  HankelMatrix b = hankel(q, l);
  const int d = static_cast<int>(spectrum.eigenvalues.size());
  Eigen::MatrixXd v(l + 1, d);
  for (int i = 0; i < d; ++i) {
    double p = 1.0;
    for (int r = 0; r <= l; ++r) {
      v(r, i) = p;
      p *= spectrum.eigenvalues(i);
    }
  }
  Eigen::MatrixXd recon = v * spectrum.eigenvalues.asDiagonal() * v.transpose();
  return (b.mat - recon).cwiseAbs().maxCoeff();
}

namespace {

std::vector<CriterionReport> criteria_bundle(const MomentVector& mv, const std::string& prefix,
                                             const std::string& origin) {
  std::vector<CriterionReport> out;
  CriterionReport a = q3_criterion(mv);
  CriterionReport b = q3_optimized_criterion(mv);
  CriterionReport c = hankel_criterion(mv);
  a.criterion_id = prefix + "q3_lambda";
  b.criterion_id = prefix + "q3_opt";
  c.criterion_id = prefix + "hankel";
  for (CriterionReport* r : {&a, &b, &c}) {
    r->detail = origin + "; " + r->detail;
    out.push_back(std::move(*r));
  }
  return out;
}

}  // namespace

std::vector<CriterionReport> full_report(const DensityMatrix& rho, const PositiveMapSpec& lam) {
  std::vector<CriterionReport> reports;

  ComplexMatrix theta = normalized_image(lam, rho);
  MomentVector mv = moments_of(theta);
  std::ostringstream origin;
  origin << "map=" << lam.name() << " (" << lam.provenance() << ")";
  for (CriterionReport& r : criteria_bundle(mv, "", origin.str())) reports.push_back(std::move(r));

  PositiveMapSpec t = transpose_map(rho.dims().dB);
  ComplexMatrix theta_t = normalized_image(t, rho);
  MomentVector mv_t = moments_of(theta_t);
  for (CriterionReport& r : criteria_bundle(mv_t, "pt_", "map=transpose (builtin)")) {
    reports.push_back(std::move(r));
  }
  return reports;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string reports_to_json_text(const std::vector<CriterionReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CriterionReport& r : reports) {
    nlohmann::json j;
    j["criterion_id"] = r.criterion_id;
    j["value"] = round12(r.value);
    j["bound"] = round12(r.bound);
    j["margin"] = round12(r.margin);
    j["verdict"] = verdict_to_string(r.verdict);
    j["detail"] = r.detail;
    arr.push_back(std::move(j));
  }
  return arr.dump();
}

}  // namespace lamom
