#pragma once

#include <optional>
#include <ostream>

#include "ttau/tau_pure.hpp"

namespace ttau {

enum class Party { A, B, C };

inline const char* party_name(Party p) {
  switch (p) {
    case Party::A: return "A";
    case Party::B: return "B";
    default: return "C";
  }
}

// Two-outcome POVM on a qubit: A_1 = U_1 diag(a,b) V and
// A_2 = U_2 diag(sqrt(1-a^2), sqrt(1-b^2)) V, so A_1^+A_1 + A_2^+A_2 = I.
struct PovmPair {
  double a = 1.0, b = 1.0;
  CMatrix u1, u2, v;

  CMatrix element(int outcome) const {
    Eigen::Vector2cd d;
    if (outcome == 1)
      d << a, b;
    else if (outcome == 2)
      d << std::sqrt(1.0 - a * a), std::sqrt(1.0 - b * b);
    else
      throw std::invalid_argument("PovmPair: outcome must be 1 or 2");
    const CMatrix& u = outcome == 1 ? u1 : u2;
    return u * d.asDiagonal() * v;
  }

  double completeness_residual() const {
    const CMatrix a1 = element(1), a2 = element(2);
    return (a1.adjoint() * a1 + a2.adjoint() * a2 - CMatrix::Identity(2, 2))
        .cwiseAbs()
        .maxCoeff();
  }
};

inline PovmPair random_povm(std::uint64_t seed) {
  GaussianStream g(seed);
  PovmPair p;
  p.a = g.uniform();
  p.b = g.uniform();
  p.u1 = haar_unitary(2, seed * 3 + 1);
  p.u2 = haar_unitary(2, seed * 3 + 2);
  p.v = haar_unitary(2, seed * 3 + 3);
  return p;
}

struct PovmOutcome {
  double probability = 0.0;
  std::optional<PureState> post_state;  // empty when probability < 1e-14
};

// Apply a single-party operator: 2x2 on A or B, n x n on C.  Probability is
// the squared norm of the transformed vector.
inline PovmOutcome apply_local(const PureState& s, Party party, const CMatrix& op) {
  const Index n = s.n();
  const Index expect = party == Party::C ? n : 2;
  if (op.rows() != expect || op.cols() != expect)
    throw std::invalid_argument("apply_local: operator dimension mismatch");
  CVector out = CVector::Zero(4 * n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (Index k = 0; k < n; ++k) {
        Complex acc = 0.0;
        switch (party) {
          case Party::A:
            for (int ip = 0; ip < 2; ++ip)
              acc += op(i, ip) * s.vector()((2 * ip + j) * n + k);
            break;
          case Party::B:
            for (int jp = 0; jp < 2; ++jp)
              acc += op(j, jp) * s.vector()((2 * i + jp) * n + k);
            break;
          case Party::C:
            for (Index kp = 0; kp < n; ++kp)
              acc += op(k, kp) * s.vector()((2 * i + j) * n + kp);
            break;
        }
        out((2 * i + j) * n + k) = acc;
      }
  PovmOutcome result;
  result.probability = out.squaredNorm();
  if (result.probability >= 1e-14)
    result.post_state = PureState(n, out / out.norm());
  return result;
}

struct AverageTau {
  double avg = 0.0;
  double before = 0.0;
};

// <tau> = p_1 tau(psi_1') + p_2 tau(psi_2') for a qubit-party POVM.
inline AverageTau average_tau(const PureState& s, const PovmPair& povm, Party party) {
  if (party == Party::C)
    throw std::invalid_argument("average_tau: semi-monotone guarantee covers parties A and B only");
  AverageTau out;
  out.before = tau(s);
  for (int outcome : {1, 2}) {
    const PovmOutcome res = apply_local(s, party, povm.element(outcome));
    if (res.post_state) out.avg += res.probability * tau(*res.post_state);
  }
  return out;
}

struct TrialRow {
  Index trial = 0;
  Party party = Party::A;
  double tau_before = 0.0;
  double tau_after_avg = 0.0;
  double excess = 0.0;
};

struct MonotonicityReport {
  Index trials = 0;
  Index violations = 0;
  double worst_excess = 0.0;
  std::vector<TrialRow> rows;
};

inline constexpr double kMonotonicityTolerance = 1e-9;

// Per trial: random state, random POVM, random qubit party; a violation is
// avg > before + 1e-9.
inline MonotonicityReport check_monotonicity(Index n, Index trials, std::uint64_t seed) {
  MonotonicityReport report;
  report.trials = trials;
  for (Index t = 0; t < trials; ++t) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
    const PureState psi = random_pure(n, s * 2 + 1);
    const PovmPair povm = random_povm(s * 2 + 2);
    const Party party = (GaussianStream(s * 2 + 3).uniform() < 0.5) ? Party::A : Party::B;
    const AverageTau result = average_tau(psi, povm, party);
    const double excess = result.avg - result.before;
    if (excess > kMonotonicityTolerance) ++report.violations;
    report.worst_excess = std::max(report.worst_excess, excess);
    report.rows.push_back(TrialRow{t, party, result.before, result.avg, excess});
  }
  return report;
}

struct InvarianceReport {
  Index trials = 0;
  double max_deviation = 0.0;
};

// Independent Haar unitaries on all three parties; tau must be unchanged.
inline InvarianceReport check_lu_invariance(Index n, Index trials, std::uint64_t seed) {
  InvarianceReport report;
  report.trials = trials;
  for (Index t = 0; t < trials; ++t) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
    PureState psi = random_pure(n, s * 4 + 1);
    const double before = tau(psi);
    psi = *apply_local(psi, Party::A, haar_unitary(2, s * 4 + 2)).post_state;
    psi = *apply_local(psi, Party::B, haar_unitary(2, s * 4 + 3)).post_state;
    psi = *apply_local(psi, Party::C, haar_unitary(n, s * 4 + 4)).post_state;
    report.max_deviation = std::max(report.max_deviation, std::abs(tau(psi) - before));
  }
  return report;
}

inline void write_report_csv(std::ostream& out, const MonotonicityReport& report) {
  out << "trial,party,tau_before,tau_after_avg,excess\n";
  char buf[128];
  for (const TrialRow& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%lld,%s,%.10g,%.10g,%.10g",
                  static_cast<long long>(row.trial), party_name(row.party),
                  row.tau_before, row.tau_after_avg, row.excess);
    out << buf << "\n";
  }
}

}  // namespace ttau
