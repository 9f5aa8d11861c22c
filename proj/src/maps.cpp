#include "lamom/maps.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lamom/rng.hpp"

namespace lamom {

Eigen::VectorXcd vec(const ComplexMatrix& x) {
  return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}

ComplexMatrix unvec(const Eigen::VectorXcd& v, int d) {
  if (v.size() != static_cast<Eigen::Index>(d) * d) {
    throw Error(errc::dimension_mismatch, "unvec: vector length is not d^2");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

namespace {

// L(X^dag) = L(X)^dag for all X iff S[jd+i, bd+a] = conj(S[id+j, ad+b]).
double hermiticity_preservation_residual(const ComplexMatrix& s, int d) {
  double res = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          res = std::max(res, std::abs(s(j * d + i, b * d + a) -
                                       std::conj(s(i * d + j, a * d + b))));
  return res;
}

// Trace scaling c0 exists iff L^dag(I) = c0 I.
std::optional<double> detect_trace_scale(const ComplexMatrix& s, int d) {
  Eigen::VectorXcd vid = vec(ComplexMatrix::Identity(d, d));
  ComplexMatrix m = unvec(s.adjoint() * vid, d);
  const cdouble c = m.trace() / static_cast<double>(d);
  const double scale = std::max(1.0, max_abs(m));
  if (std::abs(c.imag()) > 1e-11 * scale) return std::nullopt;
  if (max_abs(m - c.real() * ComplexMatrix::Identity(d, d)) > 1e-11 * scale) return std::nullopt;
  return c.real();
}

}  // namespace

PositiveMapSpec::PositiveMapSpec(std::string name, int dim, ComplexMatrix superop,
                                 std::string provenance)
    : name_(std::move(name)), dim_(dim), superop_(std::move(superop)),
      provenance_(std::move(provenance)) {
  if (dim_ < 1) throw Error(errc::param_out_of_range, "map dimension must be positive");
  const Eigen::Index d2 = static_cast<Eigen::Index>(dim_) * dim_;
  if (superop_.rows() != d2 || superop_.cols() != d2) {
    throw Error(errc::dimension_mismatch, "superoperator must be dim^2 x dim^2");
  }
  const double res = hermiticity_preservation_residual(superop_, dim_);
  const double tol = 1e-11 * std::max(1.0, max_abs(superop_));
  if (res > tol) {
    std::ostringstream os;
    os << "map '" << name_ << "' is not hermiticity-preserving (residual " << res << ")";
    throw Error(errc::invariant_violation, os.str(), res);
  }
  trace_scale_ = detect_trace_scale(superop_, dim_);
}

ComplexMatrix superop_from_action(int d,
                                  const std::function<ComplexMatrix(const ComplexMatrix&)>& fn) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix s(d2, d2);
  ComplexMatrix unit = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      unit(i, j) = 1.0;
      s.col(j * d + i) = vec(fn(unit));
      unit(i, j) = 0.0;
    }
  return s;
}

ComplexMatrix apply_map(const PositiveMapSpec& lam, const ComplexMatrix& x) {
  const int d = lam.dim();
  if (x.rows() != d || x.cols() != d) {
    throw Error(errc::dimension_mismatch, "apply_map: operand does not match map dimension");
  }
  return unvec(lam.superop() * vec(x), d);
}

PositiveMapSpec identity_map(int d) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  return PositiveMapSpec("identity", d, ComplexMatrix::Identity(d2, d2), "builtin");
}

PositiveMapSpec transpose_map(int d) {
  ComplexMatrix s = superop_from_action(
      d, [](const ComplexMatrix& x) { return ComplexMatrix(x.transpose()); });
  return PositiveMapSpec("transpose", d, std::move(s), "builtin");
}

PositiveMapSpec lambda1_map() {
  ComplexMatrix s = superop_from_action(3, [](const ComplexMatrix& x) {
    ComplexMatrix y = -x;
    for (int i = 0; i < 3; ++i) y(i, i) = x(i, i) + x((i + 2) % 3, (i + 2) % 3);
    return y;
  });
  return PositiveMapSpec("lambda1", 3, std::move(s), "builtin");
}

PositiveMapSpec adjoint_map(const PositiveMapSpec& lam) {
  return PositiveMapSpec(lam.name() + "_adj", lam.dim(), lam.superop().adjoint(),
                         lam.provenance());
}

PositiveMapSpec random_positive_map(int d, int n_kraus, std::uint64_t seed) {
  if (d < 2 || n_kraus < 1) {
    throw Error(errc::param_out_of_range, "random_positive_map: need d >= 2, n_kraus >= 1");
  }
  Rng rng = make_rng(seed);
  std::vector<ComplexMatrix> g;
  g.reserve(n_kraus);
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < n_kraus; ++i) {
    g.push_back(gaussian_complex_matrix(rng, d, d));
    p += g.back().adjoint() * g.back();
  }
  // Normalize so sum K_i^dag K_i = I (trace-preserving Phi).
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(p);
  ComplexMatrix p_inv_sqrt = es.eigenvectors() *
                             es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                             es.eigenvectors().adjoint();
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix s_phi = ComplexMatrix::Zero(d2, d2);
  for (const ComplexMatrix& gi : g) {
    ComplexMatrix k = gi * p_inv_sqrt;
    s_phi += kron(k.conjugate(), k);  // vec(K X K^dag) = (conj(K) (x) K) vec(X)
  }
  ComplexMatrix s_t = superop_from_action(
      d, [](const ComplexMatrix& x) { return ComplexMatrix(x.transpose()); });
  std::ostringstream name;
  name << "random_t_cptp(d=" << d << ",k=" << n_kraus << ",seed=" << seed << ")";
  return PositiveMapSpec(name.str(), d, s_t * s_phi, "random");
}

ComplexMatrix extend_apply_raw(const PositiveMapSpec& lam, const ComplexMatrix& m, int dA) {
  const int dB = lam.dim();
  const Eigen::Index d = static_cast<Eigen::Index>(dA) * dB;
  if (dA < 1 || m.rows() != d || m.cols() != d) {
    throw Error(errc::dimension_mismatch, "extend_apply_raw: matrix is not (dA*dim) square");
  }
  ComplexMatrix out(d, d);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j)
      out.block(static_cast<Eigen::Index>(i) * dB, static_cast<Eigen::Index>(j) * dB, dB, dB) =
          apply_map(lam, m.block(static_cast<Eigen::Index>(i) * dB,
                                 static_cast<Eigen::Index>(j) * dB, dB, dB));
  return out;
}

ComplexMatrix extend_and_apply(const PositiveMapSpec& lam, const DensityMatrix& rho) {
  if (lam.dim() != rho.dims().dB) {
    throw Error(errc::dimension_mismatch, "map dimension does not match subsystem B");
  }
  return extend_apply_raw(lam, rho.mat(), rho.dims().dA);
}

ComplexMatrix normalized_image_raw(const PositiveMapSpec& lam, const ComplexMatrix& m, int dA) {
  ComplexMatrix img = extend_apply_raw(lam, m, dA);
  const double t = img.trace().real();
  if (std::abs(t) <= 1e-10) {
    throw Error(errc::degenerate_normalization,
                "normalized_image: image trace is numerically zero", std::abs(t));
  }
  if (t < 0.0) {
    std::ostringstream os;
    os << "normalized_image: image trace " << t
       << " is negative; the map is not positive or the input is not a state";
    throw Error(errc::negative_normalization, os.str(), -t);
  }
  return img / t;
}

ComplexMatrix normalized_image(const PositiveMapSpec& lam, const DensityMatrix& rho) {
  if (lam.dim() != rho.dims().dB) {
    throw Error(errc::dimension_mismatch, "map dimension does not match subsystem B");
  }
  return normalized_image_raw(lam, rho.mat(), rho.dims().dA);
}

ComplexMatrix choi_matrix(const PositiveMapSpec& lam) {
  const int d = lam.dim();
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix omega = ComplexMatrix::Zero(d2, d2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) omega(i * d + i, j * d + j) = 1.0;
  return extend_apply_raw(lam, omega, d);
}

double positivity_probe(const PositiveMapSpec& lam, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(errc::param_out_of_range, "positivity_probe: trials must be >= 1");
  Rng rng = make_rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd psi = random_pure_state(rng, lam.dim());
    ComplexMatrix img = apply_map(lam, psi * psi.adjoint());
    worst = std::min(worst, min_eigenvalue(img, 1e-8));
  }
  return worst;
}

std::optional<PositiveMapSpec> builtin_map(const std::string& name, int dim) {
  if (name == "identity") return identity_map(dim);
  if (name == "transpose") return transpose_map(dim);
  if (name == "lambda1") {
    if (dim != 3) throw Error(errc::dimension_mismatch, "lambda1 acts on dimension 3");
    return lambda1_map();
  }
  return std::nullopt;
}

namespace {
using nlohmann::json;
}

PositiveMapSpec map_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(errc::parse_error, std::string("map JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("name") || !j.contains("dim") || !j.contains("superop")) {
    throw Error(errc::parse_error, "map JSON must have name, dim and superop");
  }
  if (!j["dim"].is_number_integer() || !j["name"].is_string()) {
    throw Error(errc::parse_error, "map JSON: bad name/dim types");
  }
  const int d = j["dim"].get<int>();
  if (d < 1) throw Error(errc::parse_error, "map dim must be positive");
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  const json& js = j["superop"];
  if (!js.is_array() || static_cast<Eigen::Index>(js.size()) != d2) {
    throw Error(errc::parse_error, "superop must be a d^2 x d^2 array");
  }
  ComplexMatrix s(d2, d2);
  for (Eigen::Index i = 0; i < d2; ++i) {
    const json& row = js[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d2) {
      throw Error(errc::parse_error, "superop rows must have d^2 entries");
    }
    for (Eigen::Index k = 0; k < d2; ++k) {
      const json& e = row[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error(errc::parse_error, "superop entries must be [re, im] pairs");
      }
      s(i, k) = cdouble(e[0].get<double>(), e[1].get<double>());
    }
  }
  PositiveMapSpec lam(j["name"].get<std::string>(), d, std::move(s), "user");
  if (j.contains("trace_scale")) {
    if (!j["trace_scale"].is_number()) throw Error(errc::parse_error, "trace_scale not a number");
    const double claimed = j["trace_scale"].get<double>();
    if (!lam.trace_scale() || std::abs(*lam.trace_scale() - claimed) > 1e-9) {
      throw Error(errc::invariant_violation, "declared trace_scale does not match the superop");
    }
  }
  return lam;
}

std::string map_to_json_text(const PositiveMapSpec& lam) {
  json j;
  j["name"] = lam.name();
  j["dim"] = lam.dim();
  json rows = json::array();
  for (Eigen::Index i = 0; i < lam.superop().rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < lam.superop().cols(); ++k) {
      row.push_back({lam.superop()(i, k).real(), lam.superop()(i, k).imag()});
    }
    rows.push_back(std::move(row));
  }
  j["superop"] = std::move(rows);
  if (lam.trace_scale()) j["trace_scale"] = *lam.trace_scale();
  return j.dump();
}

PositiveMapSpec map_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::parse_error, "cannot open map file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return map_from_json_text(buf.str());
}

}  // namespace lamom
