#include "lamom/states.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lamom {

namespace {

void check_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        throw Error(errc::invariant_violation, "state matrix has non-finite entries");
}

}  // namespace

DensityMatrix::DensityMatrix(BipartiteDims dims, ComplexMatrix mat, std::string label)
    : dims_(dims), mat_(std::move(mat)), label_(std::move(label)) {
  if (dims_.dA < 1 || dims_.dB < 1) {
    throw Error(errc::param_out_of_range, "subsystem dimensions must be positive");
  }
  const Eigen::Index d = dims_.d();
  if (mat_.rows() != d || mat_.cols() != d) {
    throw Error(errc::dimension_mismatch, "state matrix does not match dA*dB");
  }
  check_finite(mat_);
  const double herm = max_abs(mat_ - mat_.adjoint());
  if (herm > kHermResTol) {
    std::ostringstream os;
    os << "state is not Hermitian (residual " << herm << ")";
    throw Error(errc::invariant_violation, os.str(), herm);
  }
  const double tr_res = std::abs(mat_.trace() - cdouble(1.0, 0.0));
  if (tr_res > kTraceTol) {
    std::ostringstream os;
    os << "state trace deviates from 1 by " << tr_res;
    throw Error(errc::invariant_violation, os.str(), tr_res);
  }
  const double min_ev = min_eigenvalue(mat_, 10 * kHermResTol);
  if (min_ev < kPsdTol) {
    std::ostringstream os;
    os << "state is not positive semidefinite (min eigenvalue " << min_ev << ")";
    throw Error(errc::invariant_violation, os.str(), -min_ev);
  }
}

DensityMatrix horodecki_state(double a) {
  if (!(a >= 2.0 && a <= 5.0)) {
    throw Error(errc::param_out_of_range, "horodecki_state: a must lie in [2, 5]");
  }
  ComplexMatrix m = ComplexMatrix::Zero(9, 9);
  // (2/7)|Psi+><Psi+|, |Psi+> = (|00>+|11>+|22>)/sqrt(3): composite indices 0,4,8
  const double psi = 2.0 / 21.0;
  for (int i : {0, 4, 8})
    for (int j : {0, 4, 8}) m(i, j) += psi;
  // (a/7) s+: |01>,|12>,|20| -> indices 1, 5, 6
  for (int i : {1, 5, 6}) m(i, i) += a / 21.0;
  // ((5-a)/7) s-: |10>,|21>,|02> -> indices 3, 7, 2
  for (int i : {3, 7, 2}) m(i, i) += (5.0 - a) / 21.0;

  std::ostringstream label;
  label << "horodecki(a=" << a << ")";
  return DensityMatrix({3, 3}, std::move(m), label.str());
}

DensityMatrix max_entangled_state(int d) {
  if (d < 2) throw Error(errc::param_out_of_range, "max_entangled_state: d must be >= 2");
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d) * d,
                                        static_cast<Eigen::Index>(d) * d);
  const double w = 1.0 / d;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i * d + i, j * d + j) = w;
  std::ostringstream label;
  label << "max_entangled(d=" << d << ")";
  return DensityMatrix({d, d}, std::move(m), label.str());
}

DensityMatrix maximally_mixed(BipartiteDims dims) {
  const int d = dims.d();
  ComplexMatrix m = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  return DensityMatrix(dims, std::move(m), "maximally_mixed");
}

namespace {

using nlohmann::json;

ComplexMatrix matrix_from_json(const json& jm, Eigen::Index d) {
  if (!jm.is_array() || static_cast<Eigen::Index>(jm.size()) != d) {
    throw Error(errc::parse_error, "matrix must be an array of d rows");
  }
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const json& row = jm[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      throw Error(errc::parse_error, "matrix rows must have d entries");
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      const json& e = row[j];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error(errc::parse_error, "matrix entries must be [re, im] pairs");
      }
      m(i, j) = cdouble(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json jm = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    jm.push_back(std::move(row));
  }
  return jm;
}

}  // namespace

DensityMatrix state_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(errc::parse_error, std::string("state JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dA") || !j.contains("dB") || !j.contains("matrix")) {
    throw Error(errc::parse_error, "state JSON must have dA, dB and matrix");
  }
  if (!j["dA"].is_number_integer() || !j["dB"].is_number_integer()) {
    throw Error(errc::parse_error, "dA and dB must be integers");
  }
  const int dA = j["dA"].get<int>();
  const int dB = j["dB"].get<int>();
  if (dA < 1 || dB < 1) throw Error(errc::parse_error, "dA and dB must be positive");
  const json& jm = j["matrix"];
  if (!jm.is_array() || jm.size() != static_cast<std::size_t>(dA) * dB) {
    throw Error(errc::parse_error, "matrix dimension does not equal dA*dB");
  }
  ComplexMatrix m = matrix_from_json(jm, static_cast<Eigen::Index>(dA) * dB);
  std::string label;
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw Error(errc::parse_error, "label must be a string");
    label = j["label"].get<std::string>();
  }
  return DensityMatrix({dA, dB}, std::move(m), std::move(label));
}

std::string state_to_json_text(const DensityMatrix& rho) {
  json j;
  j["dA"] = rho.dims().dA;
  j["dB"] = rho.dims().dB;
  if (!rho.label().empty()) j["label"] = rho.label();
  j["matrix"] = matrix_to_json(rho.mat());
  return j.dump();
}

DensityMatrix from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::parse_error, "cannot open state file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return state_from_json_text(buf.str());
}

void to_file(const DensityMatrix& rho, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(errc::parse_error, "cannot write state file: " + path);
  out << state_to_json_text(rho) << "\n";
}

}  // namespace lamom
