#include "lamom/cli_core.hpp"

#include <cmath>
#include <cstdio>

namespace lamom {

namespace {

void append_number(std::string& line, double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  line += buf;
}

}  // namespace

std::vector<SweepRow> horodecki_sweep(double from, double to, int steps,
                                      const PositiveMapSpec& lam) {
  if (steps < 2) throw Error(errc::param_out_of_range, "sweep: steps must be >= 2");
  if (!(from >= 2.0 && to <= 5.0 && from < to)) {
    throw Error(errc::param_out_of_range, "sweep: range must satisfy 2 <= from < to <= 5");
  }
  PositiveMapSpec pt = transpose_map(3);
  std::vector<SweepRow> rows;
  rows.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double a = from + (to - from) * i / (steps - 1);
    DensityMatrix rho = horodecki_state(a);

    MomentVector mv = moments_of(normalized_image(lam, rho));
    CriterionReport rep_q3 = q3_criterion(mv);
    CriterionReport rep_q3o = q3_optimized_criterion(mv);

    MomentVector mp = moments_of(normalized_image(pt, rho));
    CriterionReport rep_ppt3o = q3_optimized_criterion(mp);

    SweepRow row;
    row.a = a;
    row.q2 = mv.q[2];
    row.q3 = mv.q[3];
    row.H = rep_q3.margin;
    row.G = rep_q3o.margin;
    row.p2 = mp.q[2];
    row.p3 = mp.q[3];
    row.F = rep_ppt3o.margin;
    row.det_q3 = rep_q3.verdict == Verdict::EntanglementDetected;
    row.det_q3o = rep_q3o.verdict == Verdict::EntanglementDetected;
    row.det_ppt3o = rep_ppt3o.verdict == Verdict::EntanglementDetected;
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "a,q2,q3,H,G,p2,p3,F,verdict_q3,verdict_q3o,verdict_ppt3o\n";
  for (const SweepRow& r : rows) {
    std::string line;
    for (double x : {r.a, r.q2, r.q3, r.H, r.G, r.p2, r.p3, r.F}) {
      append_number(line, x);
      line += ',';
    }
    line += r.det_q3 ? '1' : '0';
    line += ',';
    line += r.det_q3o ? '1' : '0';
    line += ',';
    line += r.det_ppt3o ? '1' : '0';
    out << line << "\n";
  }
}

double criterion_margin(double a, const std::string& criterion, const PositiveMapSpec& lam) {
  DensityMatrix rho = horodecki_state(a);
  if (criterion == "q3" || criterion == "q3o") {
    MomentVector mv = moments_of(normalized_image(lam, rho));
    return criterion == "q3" ? q3_criterion(mv).margin : q3_optimized_criterion(mv).margin;
  }
  if (criterion == "ppt3o") {
    PositiveMapSpec pt = transpose_map(rho.dims().dB);
    MomentVector mp = moments_of(normalized_image(pt, rho));
    return q3_optimized_criterion(mp).margin;
  }
  throw Error(errc::param_out_of_range, "unknown criterion '" + criterion + "'");
}

double find_threshold(const std::string& criterion, const PositiveMapSpec& lam, double tol) {
  if (tol < 1e-9) throw Error(errc::param_out_of_range, "threshold: tol must be >= 1e-9");

  constexpr int kScanPoints = 61;
  double lo = 0.0, hi = 0.0, f_lo = 0.0;
  bool found = false;
  double prev_a = 2.0;
  double prev_f = criterion_margin(2.0, criterion, lam);
  for (int i = 1; i < kScanPoints; ++i) {
    const double a = 2.0 + 3.0 * i / (kScanPoints - 1);
    const double f = criterion_margin(a, criterion, lam);
    if (prev_f == 0.0 || prev_f * f < 0.0) {
      lo = prev_a;
      hi = a;
      f_lo = prev_f;
      found = true;
      break;
    }
    prev_a = a;
    prev_f = f;
  }
  if (!found) {
    throw Error(errc::infeasible,
                "criterion '" + criterion + "' has no margin sign change on [2, 5]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = criterion_margin(mid, criterion, lam);
    if (f_lo * f_mid <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace lamom
