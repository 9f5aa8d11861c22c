#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "lamom/moments.hpp"
#include "lamom/rng.hpp"

using namespace lamom;

namespace {

// Reference spectrum of the normalized image of the Horodecki state under the
// entrywise 3x3 map, from the block decomposition of the image:
// (3-a)/42, (9-a)/42 (x2), (a+2)/42 (x3), 5/42 (x3).
double horodecki_map_moment(double a, int k) {
  double sum = std::pow((3 - a) / 42, k) + 2 * std::pow((9 - a) / 42, k) +
               3 * std::pow((a + 2) / 42, k) + 3 * std::pow(5.0 / 42, k);
  return sum;
}

// Partial-transpose spectrum of the Horodecki state: 2/21 (x3) and
// (5 +/- sqrt((2a-5)^2+16))/42 (x3 each).
double horodecki_pt_moment(double a, int k) {
  const double s = std::sqrt((2 * a - 5) * (2 * a - 5) + 16);
  return 3 * std::pow(2.0 / 21, k) + 3 * std::pow((5 + s) / 42, k) +
         3 * std::pow((5 - s) / 42, k);
}

MomentVector lambda_moments(double a) {
  return moments_of(normalized_image(lambda1_map(), horodecki_state(a)));
}

MomentVector pt_moments(double a) {
  return moments_of(normalized_image(transpose_map(3), horodecki_state(a)));
}

DensityMatrix random_separable_state(Rng& rng, int products) {
  Eigen::VectorXd w = random_simplex_weights(rng, products);
  ComplexMatrix m = ComplexMatrix::Zero(9, 9);
  for (int t = 0; t < products; ++t) {
    Eigen::VectorXcd a = random_pure_state(rng, 3);
    Eigen::VectorXcd b = random_pure_state(rng, 3);
    m += w(t) * kron(a * a.adjoint(), b * b.adjoint());
  }
  m = 0.5 * (m + m.adjoint());
  return DensityMatrix({3, 3}, std::move(m), "separable");
}

}  // namespace

TEST_CASE("moments_of basic spectra") {
  SUBCASE("maximally mixed") {
    MomentVector mv = moments_of(ComplexMatrix::Identity(9, 9) / 9.0);
    CHECK(mv.q[0] == 9.0);
    for (int k = 1; k <= 9; ++k) CHECK(mv.q[k] == doctest::Approx(std::pow(9.0, 1 - k)));
  }
  SUBCASE("rank-one projector") {
    ComplexMatrix theta = ComplexMatrix::Zero(4, 4);
    theta(0, 0) = 1.0;
    MomentVector mv = moments_of(theta);
    CHECK(mv.q[0] == 1.0);
    for (int k = 1; k <= 4; ++k) CHECK(mv.q[k] == doctest::Approx(1.0));
  }
  SUBCASE("errors") {
    ComplexMatrix nh(3, 3);
    nh.setZero();
    nh(0, 1) = 1.0;
    nh(0, 0) = 1.0;
    CHECK_THROWS_AS(moments_of(nh), Error);
    try {
      moments_of(0.9 * ComplexMatrix::Identity(3, 3) / 3.0);
      FAIL("expected bad_trace");
    } catch (const Error& e) {
      CHECK(e.code() == errc::bad_trace);
    }
    CHECK_THROWS_AS(moments_of(ComplexMatrix::Identity(3, 3) / 3.0, 1e-10, 7), Error);
  }
}

TEST_CASE("pipeline moments match the reference spectra") {
  for (int i = 0; i <= 30; ++i) {
    const double a = 2.0 + 3.0 * i / 30.0;
    MomentVector mv = lambda_moments(a);
    MomentVector mp = pt_moments(a);
    CHECK(std::abs(mv.q[1] - 1.0) <= 1e-12);
    for (int k = 2; k <= 5; ++k) {
      CHECK(mv.q[k] == doctest::Approx(horodecki_map_moment(a, k)).epsilon(1e-12));
      CHECK(mp.q[k] == doctest::Approx(horodecki_pt_moment(a, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("moment consistency against direct matrix powers") {
  PositiveMapSpec maps[] = {lambda1_map(), transpose_map(3), identity_map(3)};
  for (const PositiveMapSpec& lam : maps) {
    for (double a : {2.0, 3.5, 4.9}) {
      ComplexMatrix theta = normalized_image(lam, horodecki_state(a));
      MomentVector mv = moments_of(theta);
      ComplexMatrix power = theta;
      for (int k = 2; k <= 5; ++k) {
        power = power * theta;
        CHECK(std::abs(mv.q[k] - power.trace().real()) <= 1e-11);
      }
    }
  }
}

TEST_CASE("hankel matrix construction") {
  MomentVector mv = moments_of(ComplexMatrix::Identity(9, 9) / 9.0);
  SUBCASE("l=1 layout") {
    HankelMatrix b = hankel(mv, 1);
    CHECK(b.mat(0, 0) == mv.q[1]);
    CHECK(b.mat(0, 1) == mv.q[2]);
    CHECK(b.mat(1, 0) == mv.q[2]);
    CHECK(b.mat(1, 1) == mv.q[3]);
    CHECK(b.mat(0, 0) == doctest::Approx(1.0));
    CHECK(b.mat(0, 1) == doctest::Approx(1.0 / 9));
    CHECK(b.mat(1, 1) == doctest::Approx(1.0 / 81));
    // singular PSD: det 0, eigenvalues >= 0
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.mat);
    CHECK(std::abs(b.mat.determinant()) <= 1e-15);
    CHECK(es.eigenvalues()(0) >= -1e-15);
  }
  SUBCASE("l=2 top-left entry is q1 = 1") {
    CHECK(hankel(mv, 2).mat(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("order too large") {
    try {
      hankel(mv, 5);
      FAIL("expected order_too_large");
    } catch (const Error& e) {
      CHECK(e.code() == errc::order_too_large);
    }
  }
}

TEST_CASE("hankel_criterion") {
  SUBCASE("separable states stay consistent for every registry map") {
    Rng rng = make_rng(41);
    PositiveMapSpec maps[] = {identity_map(3), transpose_map(3), lambda1_map(),
                              random_positive_map(3, 3, 13)};
    for (int rep = 0; rep < 25; ++rep) {
      DensityMatrix rho = random_separable_state(rng, 1 + rep % 10);
      for (const PositiveMapSpec& lam : maps) {
        MomentVector mv = moments_of(normalized_image(lam, rho));
        CHECK(hankel_criterion(mv).verdict == Verdict::SeparabilityConsistent);
      }
    }
  }
  SUBCASE("bound entangled state detected at l=1") {
    CriterionReport rep = hankel_criterion(lambda_moments(3.5));
    CHECK(rep.verdict == Verdict::EntanglementDetected);
    CHECK(rep.detail.find("B_1") != std::string::npos);
  }
  SUBCASE("synthetic spectrum with one negative eigenvalue") {
    ComplexMatrix theta = ComplexMatrix::Zero(3, 3);
    theta(0, 0) = 0.6;
    theta(1, 1) = 0.5;
    theta(2, 2) = -0.1;
    CriterionReport rep = hankel_criterion(moments_of(theta));
    CHECK(rep.verdict == Verdict::EntanglementDetected);
  }
}

TEST_CASE("q3_criterion") {
  SUBCASE("maximally mixed sits on the boundary") {
    MomentVector mv = moments_of(ComplexMatrix::Identity(9, 9) / 9.0);
    CriterionReport rep = q3_criterion(mv);
    CHECK(rep.margin == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(rep.verdict == Verdict::SeparabilityConsistent);
  }
  SUBCASE("maximally entangled state under the transpose") {
    MomentVector mv = moments_of(normalized_image(transpose_map(3), max_entangled_state(3)));
    CriterionReport rep = q3_criterion(mv);
    CHECK(rep.value == doctest::Approx(1.0 / 9).epsilon(1e-12));
    CHECK(rep.bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.margin == doctest::Approx(-8.0 / 9).epsilon(1e-12));
    CHECK(rep.verdict == Verdict::EntanglementDetected);
  }
  SUBCASE("below the detection threshold") {
    CHECK(q3_criterion(lambda_moments(3.0)).verdict == Verdict::SeparabilityConsistent);
  }
}

TEST_CASE("q3_optimal_bound") {
  SUBCASE("integer 1/q2 reproduces q2^2") {
    OptimalBoundParams p = q3_optimal_bound(0.5);
    CHECK(p.alpha == 2);
    CHECK(p.x == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p.bound == doctest::Approx(0.25).epsilon(1e-14));

    OptimalBoundParams p9 = q3_optimal_bound(1.0 / 9);
    CHECK(p9.alpha == 9);
    CHECK(p9.x == doctest::Approx(1.0 / 9).epsilon(1e-13));
    CHECK(p9.bound == doctest::Approx(1.0 / 81).epsilon(1e-13));
  }
  SUBCASE("q2 = 0.4") {
    OptimalBoundParams p = q3_optimal_bound(0.4);
    CHECK(p.alpha == 2);
    CHECK(p.x == doctest::Approx(0.43874258867227933).epsilon(1e-14));
    CHECK(p.bound == doctest::Approx(0.17075049408851473).epsilon(1e-13));
  }
  SUBCASE("floor guard at computed integer boundaries") {
    CHECK(q3_optimal_bound(1.0 / 3.0).alpha == 3);
    CHECK(q3_optimal_bound(0.2).alpha == 5);
    CHECK(q3_optimal_bound(1.0).alpha == 1);
    CHECK(q3_optimal_bound(1.0).bound == doctest::Approx(1.0));
  }
  SUBCASE("out of range") {
    for (double q2 : {0.0, -0.3, 1.01}) {
      try {
        q3_optimal_bound(q2);
        FAIL("expected q2_out_of_range");
      } catch (const Error& e) {
        CHECK(e.code() == errc::q2_out_of_range);
      }
    }
  }
}

TEST_CASE("bound dominance over q2^2") {
  for (int j = 1; j <= 1000; ++j) {
    const double q2 = j / 1000.0;
    const double bound = q3_optimal_bound(q2).bound;
    CHECK(bound >= q2 * q2 - 1e-12);
  }
  for (int n : {2, 4, 5, 8, 10}) {
    const double q2 = 1.0 / n;
    CHECK(std::abs(q3_optimal_bound(q2).bound - q2 * q2) <= 1e-12);
  }
  for (double q2 : {0.4, 0.6, 0.75}) {
    CHECK(q3_optimal_bound(q2).bound - q2 * q2 > 1e-6);
  }
}

TEST_CASE("q3_optimized_criterion") {
  SUBCASE("detects past the optimized threshold") {
    CHECK(q3_optimized_criterion(lambda_moments(3.1)).verdict ==
          Verdict::EntanglementDetected);
  }
  SUBCASE("PT variant detects free entanglement at 4.8") {
    CHECK(q3_optimized_criterion(pt_moments(4.8)).verdict == Verdict::EntanglementDetected);
  }
  SUBCASE("maximally mixed has zero margin under every registry map") {
    DensityMatrix mm = maximally_mixed({3, 3});
    for (const PositiveMapSpec& lam : {identity_map(3), transpose_map(3), lambda1_map()}) {
      CriterionReport rep = q3_optimized_criterion(moments_of(normalized_image(lam, mm)));
      CHECK(std::abs(rep.margin) <= 1e-12);
      CHECK(rep.verdict == Verdict::SeparabilityConsistent);
    }
  }
  SUBCASE("q2 above one is immediate detection") {
    MomentVector mv;
    mv.d = 9;
    mv.q = {3.0, 1.0, 1.5, 0.9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    CriterionReport rep = q3_optimized_criterion(mv);
    CHECK(rep.verdict == Verdict::EntanglementDetected);
    CHECK(rep.detail.find("exceeds separable range") != std::string::npos);
  }
}

TEST_CASE("oracle_q3_min") {
  SUBCASE("boundary values") {
    CHECK(oracle_q3_min(1.0 / 9, 9) == doctest::Approx(1.0 / 81).epsilon(1e-12));
    CHECK(oracle_q3_min(1.0, 9) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("agrees with the closed form") {
    for (double q2 : {0.15, 0.23, 0.4, 0.55, 0.81}) {
      CHECK(std::abs(oracle_q3_min(q2, 9) - q3_optimal_bound(q2).bound) <= 1e-9);
    }
  }
  SUBCASE("argmin has the flat-top profile") {
    Q3MinResult res = oracle_q3_min_solution(0.4, 9);
    REQUIRE(res.argmin.size() == 9);
    CHECK(res.argmin(0) == doctest::Approx(res.argmin(1)).epsilon(1e-7));
    CHECK(res.argmin(2) >= -1e-12);
    for (int i = 3; i < 9; ++i) CHECK(std::abs(res.argmin(i)) <= 1e-7);
    CHECK(res.argmin.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.argmin.squaredNorm() == doctest::Approx(0.4).epsilon(1e-9));
  }
  SUBCASE("infeasible inputs") {
    for (double q2 : {0.05, 1.2}) {
      try {
        oracle_q3_min(q2, 9);
        FAIL("expected infeasible");
      } catch (const Error& e) {
        CHECK(e.code() == errc::infeasible);
      }
    }
  }
}

TEST_CASE("vandermonde factorization residual") {
  SUBCASE("registry states and maps") {
    for (const PositiveMapSpec& lam : {lambda1_map(), transpose_map(3)}) {
      for (double a : {2.0, 3.5, 5.0}) {
        ComplexMatrix theta = normalized_image(lam, horodecki_state(a));
        MomentVector mv = moments_of(theta);
        HermitianSpectrum spec = hermitian_eigen(theta);
        for (int l = 1; l <= 3; ++l) CHECK(vandermonde_check(mv, spec, l) <= 1e-10);
      }
    }
  }
  SUBCASE("rank-one spectrum gives the all-ones Hankel block") {
    ComplexMatrix theta = ComplexMatrix::Zero(3, 3);
    theta(0, 0) = 1.0;
    MomentVector mv = moments_of(theta);
    HermitianSpectrum spec = hermitian_eigen(theta);
    HankelMatrix b = hankel(mv, 1);
    CHECK(b.mat(0, 0) == doctest::Approx(1.0));
    CHECK(b.mat(1, 1) == doctest::Approx(1.0));
    CHECK(vandermonde_check(mv, spec, 1) <= 1e-14);
  }
  SUBCASE("high order on a bound entangled image") {
    ComplexMatrix theta = normalized_image(lambda1_map(), horodecki_state(4.5));
    CHECK(vandermonde_check(moments_of(theta), hermitian_eigen(theta), 4) <= 1e-9);
  }
}

TEST_CASE("full_report across the family") {
  PositiveMapSpec lam1 = lambda1_map();
  SUBCASE("separable region: all six reports consistent") {
    for (const CriterionReport& r : full_report(horodecki_state(2.5), lam1)) {
      CHECK(r.verdict == Verdict::SeparabilityConsistent);
    }
  }
  SUBCASE("bound entangled region: map criteria detect, PT criteria do not") {
    std::vector<CriterionReport> reports = full_report(horodecki_state(3.5), lam1);
    REQUIRE(reports.size() == 6);
    for (const CriterionReport& r : reports) {
      const bool is_pt = r.criterion_id.rfind("pt_", 0) == 0;
      if (is_pt) {
        CHECK(r.verdict == Verdict::SeparabilityConsistent);
      } else {
        CHECK(r.verdict == Verdict::EntanglementDetected);
      }
    }
  }
  SUBCASE("free entangled region") {
    std::vector<CriterionReport> reports = full_report(horodecki_state(4.9), lam1);
    for (const CriterionReport& r : reports) {
      if (r.criterion_id == "pt_q3_lambda") continue;  // weakest PT test may miss it
      CHECK(r.verdict == Verdict::EntanglementDetected);
    }
  }
  SUBCASE("report ids and provenance detail") {
    std::vector<CriterionReport> reports = full_report(horodecki_state(2.5), lam1);
    REQUIRE(reports.size() == 6);
    CHECK(reports[0].criterion_id == "q3_lambda");
    CHECK(reports[1].criterion_id == "q3_opt");
    CHECK(reports[2].criterion_id == "hankel");
    CHECK(reports[3].criterion_id == "pt_q3_lambda");
    CHECK(reports[4].criterion_id == "pt_q3_opt");
    CHECK(reports[5].criterion_id == "pt_hankel");
    CHECK(reports[0].detail.find("lambda1") != std::string::npos);
    CHECK(reports[0].detail.find("builtin") != std::string::npos);
  }
}

TEST_CASE("criterion margins cross zero once along the family") {
  // H is strictly decreasing on [2,5]. G is strictly decreasing through its
  // zero crossing but wiggles slightly (while staying negative) where
  // alpha = floor(1/q2) jumps around a ~ 4.4-4.8, so only the single sign
  // change is asserted globally.
  double prev_h = 1e30, prev_g = 1e30, prev_f = 1e30;
  int sign_changes_h = 0, sign_changes_g = 0, sign_changes_f = 0;
  for (int i = 0; i <= 300; ++i) {
    const double a = 2.0 + 3.0 * i / 300.0;
    MomentVector mv = lambda_moments(a);
    const double h = q3_criterion(mv).margin;
    const double g = q3_optimized_criterion(mv).margin;
    const double f = q3_optimized_criterion(pt_moments(a)).margin;
    CHECK(h < prev_h);
    if (a <= 4.3) CHECK(g < prev_g);
    if (i > 0) {
      if (prev_h >= 0.0 && h < 0.0) ++sign_changes_h;
      if (prev_g >= 0.0 && g < 0.0) ++sign_changes_g;
      if (prev_f >= 0.0 && f < 0.0) ++sign_changes_f;
      CHECK(!(prev_h < 0.0 && h >= 0.0));
      CHECK(!(prev_g < 0.0 && g >= 0.0));
      CHECK(!(prev_f < 0.0 && f >= 0.0));
    }
    prev_h = h;
    prev_g = g;
    prev_f = f;
  }
  CHECK(sign_changes_h == 1);
  CHECK(sign_changes_g == 1);
  CHECK(sign_changes_f == 1);
}

TEST_CASE("report JSON shape") {
  std::vector<CriterionReport> reports = full_report(horodecki_state(3.5), lambda1_map());
  nlohmann::json arr = nlohmann::json::parse(reports_to_json_text(reports));
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 6);
  for (const auto& j : arr) {
    CHECK(j.contains("criterion_id"));
    CHECK(j.contains("value"));
    CHECK(j.contains("bound"));
    CHECK(j.contains("margin"));
    CHECK(j.contains("verdict"));
    CHECK(j.contains("detail"));
    const std::string v = j["verdict"].get<std::string>();
    CHECK((v == "SeparabilityConsistent" || v == "EntanglementDetected"));
  }
  CHECK(arr[0]["verdict"] == "EntanglementDetected");
}
