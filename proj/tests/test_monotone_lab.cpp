#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ttau/monotone_lab.hpp"

using namespace ttau;

namespace {

PovmPair diagonal_povm(double a, double b) {
  PovmPair p;
  p.a = a;
  p.b = b;
  p.u1 = p.u2 = p.v = CMatrix::Identity(2, 2);
  return p;
}

}  // namespace

TEST_CASE("povm elements satisfy completeness") {
  CHECK(diagonal_povm(0.8, 0.6).completeness_residual() < tol::structural);
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u})
    CHECK(random_povm(seed).completeness_residual() < tol::numeric);
  CHECK_THROWS_AS(diagonal_povm(0.5, 0.5).element(3), std::invalid_argument);
}

TEST_CASE("apply_local with the identity is a no-op") {
  const PureState s = random_pure(3, 7);
  for (Party party : {Party::A, Party::B, Party::C}) {
    const Index d = party == Party::C ? 3 : 2;
    const PovmOutcome out = apply_local(s, party, CMatrix::Identity(d, d));
    CHECK(out.probability == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(out.post_state);
    CHECK((out.post_state->vector() - s.vector()).cwiseAbs().maxCoeff() < tol::structural);
  }
}

TEST_CASE("apply_local acts on the right tensor slot") {
  CMatrix x(2, 2);  // bit flip
  x << 0, 1, 1, 0;
  const PureState flipped_a = *apply_local(ghz_222(), Party::A, x).post_state;
  // X_A (|000> + |111>)/sqrt(2) = (|100> + |011>)/sqrt(2)
  const double c = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(flipped_a.amp(1, 0, 0) - c) < tol::structural);
  CHECK(std::abs(flipped_a.amp(0, 1, 1) - c) < tol::structural);

  const PureState flipped_b = *apply_local(ghz_222(), Party::B, x).post_state;
  CHECK(std::abs(flipped_b.amp(0, 1, 0) - c) < tol::structural);
  CHECK(std::abs(flipped_b.amp(1, 0, 1) - c) < tol::structural);

  CHECK_THROWS_AS(apply_local(ghz_222(), Party::C, CMatrix::Identity(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("povm outcome probabilities sum to one") {
  const PureState s = random_pure(3, 21);
  const PovmPair povm = random_povm(22);
  for (Party party : {Party::A, Party::B}) {
    const double p1 = apply_local(s, party, povm.element(1)).probability;
    const double p2 = apply_local(s, party, povm.element(2)).probability;
    CHECK(p1 + p2 == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("average tau spot check: diag(0.8, 0.6) on GHZ") {
  const AverageTau r = average_tau(ghz_222(), diagonal_povm(0.8, 0.6), Party::A);
  CHECK(r.before == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(r.avg == Catch::Approx(std::sqrt(2.0) * 0.8 * 0.6).epsilon(1e-10));
  CHECK(r.avg == Catch::Approx(0.67882).margin(5e-6));
  CHECK(r.avg <= r.before);

  CHECK_THROWS_AS(average_tau(ghz_222(), diagonal_povm(0.8, 0.6), Party::C),
                  std::invalid_argument);
}

TEST_CASE("average tau depends only on the povm singular values") {
  // the unitary factors drop out of tau, so dressing diag(a,b) with Haar
  // unitaries leaves the average unchanged
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    PovmPair dressed = random_povm(seed);
    const PovmPair plain = diagonal_povm(dressed.a, dressed.b);
    const PureState s = random_pure(3, 100 + seed);
    for (Party party : {Party::A, Party::B}) {
      const double with_u = average_tau(s, dressed, party).avg;
      const double without = average_tau(s, plain, party).avg;
      CHECK(with_u == Catch::Approx(without).margin(1e-10));
    }
  }
}

TEST_CASE("monotonicity over random trials") {
  for (Index n : {2, 3}) {
    const MonotonicityReport report = check_monotonicity(n, 60, 400 + 10 * n);
    CHECK(report.trials == 60);
    CHECK(report.rows.size() == 60);
    CHECK(report.violations == 0);
    CHECK(report.worst_excess <= kMonotonicityTolerance);
  }
}

TEST_CASE("monotonicity report is deterministic") {
  const MonotonicityReport a = check_monotonicity(2, 10, 5);
  const MonotonicityReport b = check_monotonicity(2, 10, 5);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].tau_before == b.rows[i].tau_before);
    CHECK(a.rows[i].tau_after_avg == b.rows[i].tau_after_avg);
    CHECK(a.rows[i].party == b.rows[i].party);
  }
}

TEST_CASE("local unitary invariance") {
  for (Index n : {2, 3, 4}) {
    const InvarianceReport report = check_lu_invariance(n, 40, 800 + 10 * n);
    CHECK(report.max_deviation < 1e-9);
  }
}

TEST_CASE("report csv format") {
  const MonotonicityReport report = check_monotonicity(2, 3, 9);
  std::stringstream buf;
  write_report_csv(buf, report);
  std::string header;
  std::getline(buf, header);
  CHECK(header == "trial,party,tau_before,tau_after_avg,excess");
  int rows = 0;
  for (std::string line; std::getline(buf, line);) ++rows;
  CHECK(rows == 3);
}
