#include <doctest.h>

#include "edur/errors.hpp"
#include "edur/measurement.hpp"
#include "support.hpp"

using namespace edur;
using edur::testing::Generator;
using edur::testing::kPi;

TEST_CASE("projective apparatus") {
  const auto app = projective_apparatus(AxisObservable(0.0));
  CHECK(max_abs_diff(app.op(+1), ComplexMatrix2::diagonal(1.0, 0.0)) < 1e-15);
  CHECK(max_abs_diff(app.op(-1), ComplexMatrix2::diagonal(0.0, 1.0)) < 1e-15);
  CHECK(max_abs_diff(app.povm(+1) + app.povm(-1), ComplexMatrix2::identity()) < 1e-12);

  // theta = pi/2: projectors onto the sigma_y eigenvectors.
  const auto y = projective_apparatus(AxisObservable(kPi / 2));
  const auto eig = hermitian_eig(pauli(PauliAxis::y));
  CHECK(max_abs_diff(y.op(+1), outer(eig.vectors[0], eig.vectors[0])) < 1e-12);
  CHECK(max_abs_diff(y.op(-1), outer(eig.vectors[1], eig.vectors[1])) < 1e-12);
}

TEST_CASE("measurement family validation") {
  CHECK_THROWS_AS(MeasurementFamily(ComplexMatrix2::identity(), ComplexMatrix2::identity()), PreconditionError);
  CHECK_THROWS_AS(projective_apparatus(AxisObservable(0.0)).op(0), PreconditionError);
}

TEST_CASE("correction targets") {
  const CorrectionTarget t(3 * kPi / 2, 0.0);
  CHECK(t.vartheta() == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(t.phi() == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(CorrectionTarget(0.3, -kPi / 2).phi() == doctest::Approx(3 * kPi / 2).epsilon(1e-14));

  Generator gen(9);
  for (int i = 0; i < 200; ++i) {
    const CorrectionTarget target(gen.uniform(-7, 7), gen.uniform(-7, 7));
    // The two outputs are orthogonal: a unitary's images of a basis.
    CHECK(std::abs(inner(target.output_ket(+1), target.output_ket(-1))) < 1e-12);
  }
}

TEST_CASE("correction leaves the POVM unchanged") {
  Generator gen(10);
  for (int i = 0; i < 500; ++i) {
    const AxisObservable oa(gen.uniform(0, kPi));
    const auto plain = projective_apparatus(oa);
    const auto corrected = corrected_apparatus(oa, CorrectionTarget(gen.uniform(0, kPi), gen.uniform(0, 2 * kPi)));
    for (int m : {1, -1}) CHECK(max_abs_diff(corrected.povm(m), plain.povm(m)) < 1e-12);
    // Trace-preserving channel on random inputs.
    const QubitState s = gen.state();
    const QubitState out = corrected.apply(s);
    CHECK(std::abs(out.rho().trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("identity correction reduces to the projective apparatus") {
  for (double theta : {0.0, 0.4, kPi / 2, 2.5, kPi}) {
    const AxisObservable oa(theta);
    const auto corrected = corrected_apparatus(oa, eigenstate_target(oa, +1));
    const auto plain = projective_apparatus(oa);
    for (int m : {1, -1}) CHECK(max_abs_diff(corrected.op(m), plain.op(m)) < 1e-12);
  }
}

TEST_CASE("optimal correction at 5pi/18 maps outcomes onto sigma_y eigenstates") {
  const AxisObservable oa(5 * kPi / 18);
  const AxisObservable b(kPi / 2);
  const auto app = corrected_apparatus(oa, branch_target(oa, b, CorrectionBranch::optimal));
  for (int m : {1, -1}) {
    const QubitState post = QubitState::pure(app.op(m) * oa.eigenket(m));
    const auto r = post.bloch();
    CHECK(std::abs(std::abs(r[1]) - 1.0) < 1e-12);
  }
}

TEST_CASE("output operators") {
  CHECK(max_abs_diff(output_operator_a(projective_apparatus(AxisObservable(0.0)), 1), pauli(PauliAxis::z)) < 1e-15);
  CHECK(max_abs_diff(output_operator_a(projective_apparatus(AxisObservable(kPi / 2)), 1), pauli(PauliAxis::y)) <
        1e-12);
  CHECK_THROWS_AS(output_operator_a(projective_apparatus(AxisObservable(0.0)), 3), PreconditionError);

  Generator gen(12);
  for (int i = 0; i < 300; ++i) {
    const AxisObservable oa(gen.uniform(0, kPi));
    const AxisObservable b(gen.uniform(0, kPi));
    const auto app = corrected_apparatus(oa, CorrectionTarget(gen.uniform(0, kPi), gen.uniform(0, 2 * kPi)));
    CHECK(max_abs_diff(output_operator_a(app, 1), oa.matrix()) < 1e-12);
    CHECK(max_abs_diff(output_operator_a(app, 2), ComplexMatrix2::identity()) < 1e-12);
    CHECK(max_abs_diff(output_operator_b(app, b, 2), ComplexMatrix2::identity()) < 1e-12);

    // O_B = (B+ + B-)/2 + (B+ - B-)/2 O_A with B_m the B-expectation of the
    // m-th output state.
    const QubitState out_plus = QubitState::pure(app.op(+1) * oa.eigenket(+1));
    const QubitState out_minus = QubitState::pure(app.op(-1) * oa.eigenket(-1));
    const double bp = expectation(b.matrix(), out_plus);
    const double bm = expectation(b.matrix(), out_minus);
    const ComplexMatrix2 expected =
        ComplexMatrix2::identity() * Complex{(bp + bm) / 2} + oa.matrix() * Complex{(bp - bm) / 2};
    CHECK(max_abs_diff(output_operator_b(app, b, 1), expected) < 1e-12);
    CHECK(std::abs((bp - bm) / 2) <= 1.0 + 1e-12);
  }

  SUBCASE("uncorrected, B = sigma_y gives sin(theta_oa) O_A") {
    for (double theta : {0.0, 0.3, 1.0, kPi / 2, 2.0, kPi}) {
      const AxisObservable oa(theta);
      const auto ob = output_operator_b(projective_apparatus(oa), AxisObservable(kPi / 2), 1);
      CHECK(max_abs_diff(ob, oa.matrix() * Complex{std::sin(theta)}) < 1e-12);
    }
  }
  SUBCASE("B = O_A, uncorrected: O_B = O_A") {
    const AxisObservable oa(0.7);
    CHECK(max_abs_diff(output_operator_b(projective_apparatus(oa), oa, 1), oa.matrix()) < 1e-12);
  }
  SUBCASE("optimal correction: Re<B O_B> = cos(theta_b - theta_oa) on rho_x") {
    const AxisObservable oa(5 * kPi / 18);
    const AxisObservable b(kPi / 2);
    const auto app = corrected_apparatus(oa, branch_target(oa, b, CorrectionBranch::optimal));
    for (double alpha : {0.0, 0.5, 1.0}) {
      const double value = trace_with(b.matrix() * output_operator_b(app, b, 1), rho_x(alpha)).real();
      CHECK(value == doctest::Approx(std::cos(kPi / 2 - 5 * kPi / 18)).epsilon(1e-12));
    }
  }
}
