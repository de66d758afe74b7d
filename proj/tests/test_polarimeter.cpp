#include <doctest.h>

#include <cmath>

#include "edur/errors.hpp"
#include "edur/polarimeter.hpp"
#include "edur/quadrature.hpp"
#include "support.hpp"

using namespace edur;
using edur::testing::Generator;
using edur::testing::kPi;

namespace {

const AxisObservable kA(0.0);
const AxisObservable kSigmaY(kPi / 2);
const QubitState kUp = QubitState::from_bloch({0, 0, 1});

MeasurementFamily optimal_app(double theta_oa, const AxisObservable& b) {
  const AxisObservable oa(theta_oa);
  return corrected_apparatus(oa, branch_target(oa, b, CorrectionBranch::optimal));
}

CountSettings exact(double n = 1.0) { return {CountMode::exact, n, 0}; }

}  // namespace

TEST_CASE("quadrature rules") {
  for (std::size_t n : {3u, 16u, 64u, 256u, 1024u, 4096u}) {
    const auto& h = gauss_hermite(n);
    double w = 0.0;
    double x2 = 0.0;
    double x4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w += h.weights[i];
      x2 += h.weights[i] * h.nodes[i] * h.nodes[i];
      x4 += h.weights[i] * std::pow(h.nodes[i], 4);
      if (i > 0) CHECK(h.nodes[i] > h.nodes[i - 1]);
    }
    // Moments of exp(-x^2): sqrt(pi), sqrt(pi)/2, 3 sqrt(pi)/4.
    CHECK(w == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(x2 == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-11));
    CHECK(x4 == doctest::Approx(3 * std::sqrt(kPi) / 4).epsilon(1e-10));

    const auto& l = gauss_legendre(n);
    double lw = 0.0;
    double l2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lw += l.weights[i];
      l2 += l.weights[i] * l.nodes[i] * l.nodes[i];
    }
    CHECK(lw == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(l2 == doctest::Approx(2.0 / 3).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gauss_hermite(0), PreconditionError);
}

TEST_CASE("mixing channel") {
  NoisyRotationSpec spec;
  const QubitState noiseless = mixing_channel(spec, kUp);
  CHECK(noiseless.bloch_length() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(noiseless.bloch()[1] == doctest::Approx(-1.0).epsilon(1e-12));

  spec.noise_sigma = std::sqrt(2 * std::log(2.0));
  CHECK(mixing_channel(spec, kUp).bloch_length() == doctest::Approx(0.5).epsilon(1e-9));

  spec.noise_sigma = 20.0;
  CHECK(mixing_channel(spec, kUp).bloch_length() < 1e-6);

  // Uniform noise of half-width w: <cos d> = sin(w)/w.
  spec.distribution = NoiseDistribution::uniform;
  spec.noise_sigma = 0.6;
  const double w = std::sqrt(3.0) * 0.6;
  CHECK(mixing_channel(spec, kUp).bloch_length() == doctest::Approx(std::sin(w) / w).epsilon(1e-10));

  Generator gen(30);
  for (int i = 0; i < 100; ++i) {
    NoisyRotationSpec s;
    s.noise_sigma = gen.uniform(0, 3);
    s.nominal_angle = gen.uniform(0, 2 * kPi);
    s.distribution = i % 2 ? NoiseDistribution::uniform : NoiseDistribution::gaussian;
    const QubitState in = gen.state();
    const QubitState out = mixing_channel(s, in);
    CHECK(std::abs(out.rho().trace().real() - 1.0) < 1e-12);
    // x component is untouched by rotations about x.
    CHECK(std::abs(out.bloch()[0] - in.bloch()[0]) < 1e-10);
    if (s.distribution == NoiseDistribution::gaussian) {
      // The (y, z) block contracts by exp(-sigma^2/2) around the nominal rotation.
      const double shrink = std::exp(-s.noise_sigma * s.noise_sigma / 2);
      const BlochVector nominal = in.conjugated(rotation_about_x(s.nominal_angle)).bloch();
      CHECK(std::abs(out.bloch()[1] - shrink * nominal[1]) < 1e-9);
      CHECK(std::abs(out.bloch()[2] - shrink * nominal[2]) < 1e-9);
    }
  }
  spec.noise_sigma = -1.0;
  CHECK_THROWS_AS(mixing_channel(spec, kUp), PreconditionError);
}

TEST_CASE("solve_sigma_for_alpha") {
  CHECK(solve_sigma_for_alpha(1.0, NoiseDistribution::gaussian) == 0.0);
  CHECK(solve_sigma_for_alpha(0.5, NoiseDistribution::gaussian) == doctest::Approx(1.17741).epsilon(1e-5));
  CHECK(solve_sigma_for_alpha(0.25, NoiseDistribution::gaussian) == doctest::Approx(1.66511).epsilon(1e-5));
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (auto dist : {NoiseDistribution::gaussian, NoiseDistribution::uniform}) {
      const QubitState prepared = prepare_rho_x(alpha, dist);
      CHECK(std::abs(prepared.bloch_length() - alpha) < 1e-6);
      CHECK(fidelity(prepared, rho_x(alpha)) > 1 - 1e-9);
    }
  }
  CHECK_THROWS_AS(solve_sigma_for_alpha(1.5, NoiseDistribution::gaussian), RangeError);
  CHECK_THROWS_AS(solve_sigma_for_alpha(-0.1, NoiseDistribution::uniform), RangeError);
}

TEST_CASE("simulate_counts") {
  const auto uniform = simulate_counts(projective_apparatus(kA), kSigmaY, rho_x(1.0), exact());
  for (double e : uniform.entries()) CHECK(e == doctest::Approx(0.25).epsilon(1e-14));

  const auto up = simulate_counts(projective_apparatus(kA), kSigmaY, kUp, exact(100));
  CHECK(up.at(-1, 1) < 1e-20);
  CHECK(up.at(-1, -1) < 1e-20);
  CHECK(up.total() == doctest::Approx(100.0));

  CHECK_THROWS_AS(simulate_counts(projective_apparatus(kA), kSigmaY, kUp, exact(0.0)), PreconditionError);

  Generator gen(31);
  for (int i = 0; i < 1000; ++i) {
    const AxisObservable oa(gen.uniform(0, kPi));
    const auto app = corrected_apparatus(oa, CorrectionTarget(gen.uniform(0, kPi), gen.uniform(0, 2 * kPi)));
    const auto p = joint_probabilities(app, AxisObservable(gen.uniform(0, kPi)), gen.state());
    CHECK(std::abs(p[0] + p[1] + p[2] + p[3] - 1.0) < 1e-12);
  }

  SUBCASE("poisson draws are reproducible and centred") {
    const CountSettings settings{CountMode::poisson, 1e4, 77};
    const auto app = optimal_app(5 * kPi / 18, kSigmaY);
    const auto first = simulate_counts(app, kSigmaY, rho_x(0.5), settings, 3);
    const auto again = simulate_counts(app, kSigmaY, rho_x(0.5), settings, 3);
    CHECK(first.entries() == again.entries());
    const auto other = simulate_counts(app, kSigmaY, rho_x(0.5), settings, 4);
    CHECK(first.entries() != other.entries());
    for (double e : first.entries()) CHECK(e == std::floor(e));
    CHECK(std::abs(first.total() - 1e4) < 5 * 100.0);
  }
}

TEST_CASE("expectations_from_counts") {
  const auto zero = expectations_from_counts(CountTable({5, 5, 5, 5}, CountMode::exact, 20));
  CHECK(zero.mean_oa == 0.0);
  CHECK(zero.mean_ob == 0.0);
  const auto one = expectations_from_counts(CountTable({7, 0, 0, 0}, CountMode::exact, 7));
  CHECK(one.mean_oa == 1.0);
  CHECK(one.mean_ob == 1.0);

  // Optimal correction at 5pi/18 makes O_B = O_A: zero on rho_x(1), and
  // cos(theta_b - theta_oa) on the sigma_y eigenstate.
  const auto app = optimal_app(5 * kPi / 18, kSigmaY);
  const auto on_x = simulate_counts(app, kSigmaY, rho_x(1.0), exact(1e4));
  CHECK(std::abs(expectations_from_counts(on_x).mean_ob) < 1e-12);
  const auto on_y = simulate_counts(app, kSigmaY, QubitState::pure(kSigmaY.eigenket(+1)), exact(1e4));
  CHECK(expectations_from_counts(on_y).mean_ob == doctest::Approx(std::cos(kPi / 2 - 5 * kPi / 18)).epsilon(1e-12));

  CHECK_THROWS_AS(expectations_from_counts(CountTable({0, 0, 0, 0}, CountMode::exact, 1)), EmptyDataError);
  CHECK_THROWS_AS(CountTable({-1, 0, 0, 0}, CountMode::exact, 1), PreconditionError);
}

TEST_CASE("prefactor") {
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(prefactor(kA, rho_x(alpha)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(prefactor(AxisObservable(kPi / 3), rho_x(alpha)) == doctest::Approx(0.5).epsilon(1e-14));
  }
  const AxisObservable b(0.9);
  CHECK(prefactor(b, QubitState::pure(b.eigenket(+1))) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(PrefactorMeasurement{30, 10}.value() == 0.75);
  CHECK_THROWS_AS(PrefactorMeasurement{}.value(), EmptyDataError);
}

TEST_CASE("three-state protocol states") {
  for (double alpha : {0.0, 0.5, 1.0}) {
    // A rho A and B rho B both give rho_{-x}.
    const QubitState flipped = QubitState::from_bloch({-alpha, 0.0, 0.0});
    CHECK(max_abs_diff(rho_x(alpha).conjugated(kA.matrix()).rho(), flipped.rho()) < 1e-14);
    CHECK(max_abs_diff(rho_x(alpha).conjugated(kSigmaY.matrix()).rho(), flipped.rho()) < 1e-14);
    CHECK(conditioned_state(kA, rho_x(alpha)).purity() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(conditioned_state(kSigmaY, rho_x(alpha)), QubitState::pure(kSigmaY.eigenket(+1))) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  // Zero weight falls back to the eigenstate.
  const QubitState down = QubitState::from_bloch({0, 0, -1});
  CHECK(conditioned_state(kA, down).bloch()[2] == doctest::Approx(1.0));
}

TEST_CASE("three-state reconstruction") {
  SUBCASE("term-by-term at theta_oa = 0") {
    for (double alpha : {0.0, 0.5, 1.0}) {
      const auto run = simulate_three_state(projective_apparatus(kA), kA, kSigmaY, rho_x(alpha), exact(1e4));
      const auto terms = three_state_terms(run);
      CHECK(terms.error.prefactor == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(terms.error.conditioned == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(terms.error.reflected) < 1e-12);
      CHECK(std::abs(terms.error.plain) < 1e-12);
      CHECK(three_state_reconstruct(run).error == 0.0);
    }
  }
  SUBCASE("O_A equals B at theta_oa = pi/2") {
    const auto run = simulate_three_state(optimal_app(kPi / 2, kSigmaY), kA, kSigmaY, rho_x(0.5), exact(1e4));
    CHECK(three_state_reconstruct(run).disturbance == doctest::Approx(0.0));
  }
  SUBCASE("oracle equivalence over grids, branches and theta_b") {
    for (double theta_b : {kPi / 2, kPi / 3, kPi / 6}) {
      const AxisObservable b(theta_b);
      for (int k = 0; k <= 18; ++k) {
        const AxisObservable oa(kPi * k / 18);
        for (auto branch : {CorrectionBranch::optimal, CorrectionBranch::anti_optimal}) {
          const auto app = corrected_apparatus(oa, branch_target(oa, b, branch));
          for (double alpha : {1.0, 0.75, 0.5, 0.25, 0.0}) {
            const auto run = simulate_three_state(app, kA, b, rho_x(alpha), exact(1e4));
            const auto rec = three_state_reconstruct(run);
            const auto direct = error_disturbance(app, kA, b, rho_x(alpha));
            CHECK(std::abs(rec.error - direct.error) < 1e-9);
            CHECK(std::abs(rec.disturbance - direct.disturbance) < 1e-9);
            CHECK(rec.theta_oa == doctest::Approx(oa.theta()));
          }
        }
      }
    }
  }
  SUBCASE("random states and targets") {
    Generator gen(32);
    for (int i = 0; i < 300; ++i) {
      const AxisObservable oa(gen.uniform(0, kPi));
      const AxisObservable b(gen.uniform(0, kPi));
      const auto app = corrected_apparatus(oa, CorrectionTarget(gen.uniform(0, kPi), gen.uniform(0, 2 * kPi)));
      const QubitState s = gen.state();
      const auto rec = three_state_reconstruct(simulate_three_state(app, kA, b, s, exact(1.0)));
      const auto direct = error_disturbance(app, kA, b, s);
      CHECK(std::abs(rec.error_sq - direct.error_sq) < 1e-9);
      CHECK(std::abs(rec.disturbance_sq - direct.disturbance_sq) < 1e-9);
    }
  }
  SUBCASE("missing tables") {
    auto run = simulate_three_state(projective_apparatus(kA), kA, kSigmaY, rho_x(1.0), exact());
    auto broken = run;
    broken.disturbance_set.conditioned.reset();
    CHECK_THROWS_AS(three_state_reconstruct(broken), ProtocolIncompleteError);
    broken = run;
    broken.error_set.prefactor.reset();
    CHECK_THROWS_AS(three_state_reconstruct(broken), ProtocolIncompleteError);
    CHECK_THROWS_AS(propagate_uncertainty(broken), ProtocolIncompleteError);
    CHECK_THROWS_AS(three_state_reconstruct(ThreeStateRun{}), ProtocolIncompleteError);
  }
}

TEST_CASE("sampled reconstruction matches the propagated uncertainty") {
  const auto app = optimal_app(5 * kPi / 18, kSigmaY);
  const QubitState state = rho_x(0.5);
  const auto exact_run = simulate_three_state(app, kA, kSigmaY, state, exact(1e4));
  const auto truth = three_state_reconstruct(exact_run);
  const auto sigma = propagate_uncertainty(exact_run);
  CHECK(sigma.error_sq_sigma > 0.0);
  CHECK(sigma.disturbance_sq_sigma > 0.0);

  const int trials = 1000;
  int within_error = 0;
  int within_disturbance = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const CountSettings settings{CountMode::poisson, 1e4, derive_seed(2024, 1, std::uint64_t(t))};
    const auto rec = three_state_reconstruct(simulate_three_state(app, kA, kSigmaY, state, settings));
    within_error += std::abs(rec.error_sq - truth.error_sq) <= 3 * sigma.error_sq_sigma;
    within_disturbance += std::abs(rec.disturbance_sq - truth.disturbance_sq) <= 3 * sigma.disturbance_sq_sigma;
    sum += rec.error_sq;
    sum_sq += rec.error_sq * rec.error_sq;
  }
  CHECK(within_error >= 0.985 * trials);
  CHECK(within_disturbance >= 0.985 * trials);
  const double mean = sum / trials;
  const double sd = std::sqrt((sum_sq - trials * mean * mean) / (trials - 1));
  CHECK(std::abs(mean - truth.error_sq) < 4 * sd / std::sqrt(double(trials)));
  CHECK(std::abs(sd / sigma.error_sq_sigma - 1.0) < 0.15);
}

TEST_CASE("sampled runs are reproducible from the seed") {
  const auto app = optimal_app(0.4, kSigmaY);
  const CountSettings settings{CountMode::poisson, 1e4, 99};
  const auto a = simulate_three_state(app, kA, kSigmaY, rho_x(0.25), settings);
  const auto b = simulate_three_state(app, kA, kSigmaY, rho_x(0.25), settings);
  CHECK(a.error_set.reflected->entries() == b.error_set.reflected->entries());
  CHECK(a.disturbance_set.conditioned->entries() == b.disturbance_set.conditioned->entries());
  CHECK(a.error_set.prefactor->plus == b.error_set.prefactor->plus);
  CHECK(three_state_reconstruct(a).error_sq == three_state_reconstruct(b).error_sq);
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}
