#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/solver.hpp"

using namespace bbres;

namespace {

const std::vector<std::string> kXYZ{"x", "y", "z"};

AffineVectorField field_from(int n, int chart, const std::vector<std::string>& comps,
                             const std::vector<std::string>& names,
                             const std::string& param = "t") {
  AffineVectorField f;
  f.ambient_dim = n;
  f.chart = chart;
  for (const auto& text : comps) f.components.push_back(parse_poly(text, names, param));
  f.validate();
  return f;
}

AffineVectorField base_field() { return field_from(3, 3, {"x", "x", "y"}, kXYZ); }
AffineVectorField family_field() { return field_from(3, 3, {"x + t*z", "x", "y"}, kXYZ); }

const ProjectivePoint kO = ProjectivePoint::from_homogeneous({0.0, 0.0, 0.0, 1.0});
const ProjectivePoint kQ = ProjectivePoint::from_homogeneous({1.0, 1.0, 1.0, 0.0});

}  // namespace

TEST_CASE("newton_refine lands on O for the family") {
  const auto res = newton_refine(family_field(), {0.01, 0.01, 0.01}, 0.1);
  REQUIRE(res.status == NewtonStatus::kConverged);
  const Singularity& s = *res.singularity;
  CHECK(s.residual_norm < 1e-10);
  CHECK(projective_distance(s.point, kO) < 1e-9);
  // First jet at O: [[1,0,t],[1,0,0],[0,1,0]].
  CHECK(std::abs(s.jacobian(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(s.jacobian(0, 2) - 0.1) < 1e-12);
  CHECK(std::abs(s.jacobian(1, 0) - 1.0) < 1e-12);
  CHECK(std::abs(s.jacobian(2, 1) - 1.0) < 1e-12);
  CHECK(std::abs(s.det_jacobian - 0.1) < 1e-12);
}

TEST_CASE("newton_refine finds Q in chart 2") {
  const AffineVectorField chart2 = pushforward_chart(base_field(), 2).field;
  const auto res = newton_refine(chart2, {0.9, 1.1, 0.05}, 0.0);
  REQUIRE(res.status == NewtonStatus::kConverged);
  const Singularity& s = *res.singularity;
  CHECK(projective_distance(s.point, kQ) < 1e-9);
  CHECK(std::abs(s.affine[0] - 1.0) < 1e-10);
  CHECK(std::abs(s.affine[1] - 1.0) < 1e-10);
  CHECK(std::abs(s.affine[2]) < 1e-10);
}

TEST_CASE("newton_refine flags points on the non-isolated line as singular") {
  const auto res = newton_refine(base_field(), {0.0, 0.0, 5.0}, 0.0);
  CHECK(res.status == NewtonStatus::kSingularJacobian);
  REQUIRE(res.singularity.has_value());
  CHECK_FALSE(res.singularity->nondegenerate);
}

TEST_CASE("newton_refine is idempotent") {
  const auto first = newton_refine(family_field(), {0.01, 0.01, 0.01}, 0.1);
  REQUIRE(first.status == NewtonStatus::kConverged);
  const auto second = newton_refine(family_field(), first.singularity->affine, 0.1);
  REQUIRE(second.status == NewtonStatus::kConverged);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(first.singularity->affine[i] - second.singularity->affine[i]) < 1e-12);
}

TEST_CASE("total-degree solve on the family in its source chart") {
  const SolveReport rep = solve_total_degree(family_field(), 0.1);
  CHECK(rep.bezout == 1);
  CHECK(rep.finite_endpoints + rep.at_infinity + rep.failed == 1);
  REQUIRE(rep.finite.size() == 1);
  CHECK(projective_distance(rep.finite[0].point, kO) < 1e-9);
  CHECK(rep.finite[0].nondegenerate);
}

TEST_CASE("total-degree solve in chart 2 finds the three moving points") {
  const AffineVectorField chart2 = pushforward_chart(family_field(), 2).field;
  const SolveReport rep = solve_total_degree(chart2, 0.1);
  CHECK(rep.bezout == 8);
  CHECK(rep.finite_endpoints + rep.at_infinity + rep.failed == 8);
  int nondeg = 0;
  for (const Singularity& s : rep.finite)
    if (s.nondegenerate) ++nondeg;
  CHECK(nondeg == 3);
  // Each finite point has z~ = 0 and x~ = y~^2 with y~ a root of the cubic.
  for (const Singularity& s : rep.finite) {
    if (!s.nondegenerate) continue;
    const Complex u = s.affine[1];
    CHECK(std::abs(s.affine[0] - u * u) < 1e-8);
    CHECK(std::abs(s.affine[2]) < 1e-8);
    CHECK(std::abs(u * u * u - u * u - 0.1) < 1e-8);
  }
}

TEST_CASE("linear diagonal field has its unique zero at the origin") {
  const std::vector<std::string> xy{"x", "y"};
  const AffineVectorField lin = field_from(2, 2, {"x", "2*y"}, xy);
  const SolveReport rep = solve_total_degree(lin, 0.0);
  CHECK(rep.bezout == 1);
  REQUIRE(rep.finite.size() == 1);
  CHECK(std::abs(rep.finite[0].affine[0]) < 1e-12);
  CHECK(std::abs(rep.finite[0].affine[1]) < 1e-12);
}

TEST_CASE("undeformed field: chart 3 sees only the degenerate line") {
  const SolveReport rep = solve_total_degree(base_field(), 0.0);
  CHECK(rep.bezout == 1);
  CHECK(rep.finite_endpoints + rep.at_infinity + rep.failed == 1);
  for (const Singularity& s : rep.finite) {
    CHECK_FALSE(s.nondegenerate);
    // Endpoints sit on the line x = y = 0.
    CHECK(std::abs(s.affine[0]) < 1e-8);
    CHECK(std::abs(s.affine[1]) < 1e-8);
  }
}

TEST_CASE("singular set of the family has exactly the four expected points") {
  for (double t : {0.5, 0.1, 0.05, 0.01, 1e-4}) {
    CAPTURE(t);
    const SingularSet set = singular_set(family_field(), t);
    // c_3(TP^3) = 4 isolated nondegenerate singularities.
    REQUIRE(set.points.size() == 4);
    CHECK(set.degenerate_candidates.empty());
    int at_o = 0;
    for (const Singularity& s : set.points) {
      CHECK(s.nondegenerate);
      CHECK(s.residual_norm < 1e-10);
      if (projective_distance(s.point, kO) < 1e-6) ++at_o;
    }
    CHECK(at_o == 1);
    // Path accounting per chart.
    for (const auto& st : set.charts)
      CHECK(st.finite_endpoints + st.at_infinity + st.failed == st.bezout);
  }
}

TEST_CASE("stored Jacobians match a fresh differentiation pass") {
  const SingularSet set = singular_set(family_field(), 0.05);
  for (const Singularity& s : set.points) {
    AffineVectorField local = s.chart == 3 ? family_field()
                                           : pushforward_chart(family_field(), s.chart).field;
    const FieldSystem sys(local, 0.05);
    const MatrixXc fresh =
        sys.jacobian(Eigen::Map<const VectorXc>(s.affine.data(), 3));
    CHECK((fresh - s.jacobian).norm() < 1e-12 * std::max(1.0, s.jacobian.norm()));
  }
}

TEST_CASE("Jacobian at O matches the first-jet matrix of the family") {
  const double t = 0.05;
  const SingularSet set = singular_set(family_field(), t);
  const Singularity* at_o = nullptr;
  for (const Singularity& s : set.points)
    if (projective_distance(s.point, kO) < 1e-6) at_o = &s;
  REQUIRE(at_o != nullptr);
  REQUIRE(at_o->chart == 3);
  MatrixXc expected(3, 3);
  expected << 1, 0, t, 1, 0, 0, 0, 1, 0;
  CHECK((at_o->jacobian - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("undeformed field across charts: Q plus degenerate indications") {
  const SingularSet set = singular_set(base_field(), 0.0);
  REQUIRE(set.points.size() == 1);
  CHECK(projective_distance(set.points[0].point, kQ) < 1e-8);
  CHECK(set.points[0].nondegenerate);
  CHECK_FALSE(set.degenerate_candidates.empty());
  // All degenerate candidates sit on the line x0 = x1 = 0.
  for (const Singularity& s : set.degenerate_candidates) {
    CHECK(std::abs(s.point.coords()[0]) < 1e-6);
    CHECK(std::abs(s.point.coords()[1]) < 1e-6);
  }
  CHECK_FALSE(set.warnings.empty());
}

TEST_CASE("zero component rejected by total-degree solve") {
  AffineVectorField broken = base_field();
  broken.components[1] = MultiPoly(3);
  CHECK_THROWS_AS(solve_total_degree(broken, 0.0), std::invalid_argument);
}

TEST_CASE("nonzero constant component gives an empty variety with bezout 0") {
  const AffineVectorField f = field_from(2, 2, {"x + 1", "1"}, {"x", "y"});
  const SolveReport rep = solve_total_degree(f, 0.0);
  CHECK(rep.bezout == 0);
  CHECK(rep.finite.empty());
}
