#pragma once

#include <span>
#include <utility>

#include "ttau/tau_pure.hpp"

namespace ttau {

namespace detail {

// Weighted tilde brackets of eigenvector pairs:
// bracket(a,b)[i,j] = sqrt(u_a u_b) <gamma_a*| Sigma_ij |gamma_b>
// where Sigma_ij = sigma_y (x) sigma_y (x) e_ij.  Evaluated through the fiber
// matrices, so no 4n x 4n operator is ever formed.
inline std::vector<std::vector<CMatrix>> weighted_brackets(
    const SpectralDecomposition& sd, Index n, Index r) {
  std::vector<CMatrix> phis;
  phis.reserve(static_cast<std::size_t>(r));
  for (Index a = 0; a < r; ++a)
    phis.push_back(phi_of_flat(sd.eigenvectors[static_cast<std::size_t>(a)], n));
  std::vector<std::vector<CMatrix>> g(static_cast<std::size_t>(r),
                                      std::vector<CMatrix>(static_cast<std::size_t>(r)));
  const CMatrix ss = spin_flip_form().cast<Complex>();
  for (Index a = 0; a < r; ++a)
    for (Index b = 0; b < r; ++b)
      g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          std::sqrt(sd.eigenvalues(a) * sd.eigenvalues(b)) *
          (phis[static_cast<std::size_t>(a)].transpose() * ss *
           phis[static_cast<std::size_t>(b)]);
  return g;
}

}  // namespace detail

// Eigenbasis tensor of the mixed-state expansion.  The eight rank indices are
// stored in paired-slot order: rows (pm, p'm'), columns (nq, n'q'), so the
// tensor is a Hermitian positive semidefinite r^4 x r^4 matrix.  Exchanging
// the two doubled slots maps an entry to its complex conjugate; for real
// density matrices the entries are real and the exchange is an exact symmetry.
struct ATensor {
  Index r = 0;
  CMatrix paired;  // r^4 x r^4

  Index slot(Index p, Index m) const { return p * r + m; }

  Complex at(Index pm, Index pm_prime, Index nq, Index nq_prime) const {
    return paired(pm * r * r + pm_prime, nq * r * r + nq_prime);
  }

  Complex at8(Index p, Index m, Index pp, Index mp, Index n, Index q, Index np,
              Index qp) const {
    return at(slot(p, m), slot(pp, mp), slot(n, q), slot(np, qp));
  }
};

inline constexpr Index kATensorRankBound = 6;
inline constexpr Index kRoofRankBound = 16;

inline ATensor build_a_tensor(const SpectralDecomposition& sd, Index n) {
  const Index r = sd.rank;
  if (r < 1) throw std::invalid_argument("build_a_tensor: empty decomposition");
  if (r > kATensorRankBound)
    throw std::invalid_argument(
        "build_a_tensor: rank " + std::to_string(r) + " exceeds bound " +
        std::to_string(kATensorRankBound) +
        "; use the quasi-pure path (tau_a) for high-rank states");
  const auto g = detail::weighted_brackets(sd, n, r);
  const Index dim = r * r * r * r;
  CMatrix h = CMatrix::Zero(dim, dim);
  CVector f(dim);
  for (Index i = 0; i < n; ++i)
    for (Index l = 0; l < n; ++l) {
      if (i == l) continue;
      for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k) {
          if (j == k) continue;
          for (Index p = 0; p < r; ++p)
            for (Index m = 0; m < r; ++m)
              for (Index pp = 0; pp < r; ++pp)
                for (Index mp = 0; mp < r; ++mp) {
                  const auto& gp = g[static_cast<std::size_t>(p)][static_cast<std::size_t>(pp)];
                  const auto& gm = g[static_cast<std::size_t>(m)][static_cast<std::size_t>(mp)];
                  f(((p * r + m) * r + pp) * r + mp) =
                      gp(i, j) * gm(l, k) - gp(i, k) * gm(l, j);
                }
          h += f * f.adjoint();
        }
    }
  return ATensor{r, std::move(h)};
}

// One Kronecker term of a factored tensor block: left acts on the (p, p')
// index pair, right on (m, m').
struct KronTerm {
  CMatrix left;   // r x r
  CMatrix right;  // r x r
};

struct RoofFactor {
  double weight = 0.0;             // eigenvalue of the paired-slot matrix
  std::vector<KronTerm> terms;     // Kronecker split of the r^2 x r^2 factor
};

// Factor the tensor as sum_a weight_a V_a (x) V_a^* over the doubled slots,
// with each V_a further split into Kronecker products of r x r matrices.
// Retaining all terms reproduces the tensor exactly.
inline std::vector<RoofFactor> factor_a(const ATensor& a) {
  const Index r = a.r;
  const Index dim = r * r * r * r;
  if (a.paired.rows() != dim || a.paired.cols() != dim)
    throw std::invalid_argument("factor_a: tensor shape inconsistent with rank");
  const double scale = std::max(1.0, a.paired.cwiseAbs().maxCoeff());
  if ((a.paired - a.paired.adjoint()).cwiseAbs().maxCoeff() > 1e-6 * scale)
    throw std::runtime_error(
        "factor_a: doubled-slot exchange symmetry broken (tensor not Hermitian "
        "in paired form)");
  if (a.paired.cwiseAbs().maxCoeff() == 0.0) return {};
  const HermitianEig eig = hermitian_eig(a.paired);
  const double top = eig.eigenvalues.maxCoeff();
  std::vector<RoofFactor> out;
  for (Index t = 0; t < dim; ++t) {
    const double lambda = eig.eigenvalues(t);
    if (lambda <= 1e-12 * top) continue;
    CMatrix v(r * r, r * r);  // rows (pm), cols (p'm')
    for (Index pm = 0; pm < r * r; ++pm)
      for (Index pmp = 0; pmp < r * r; ++pmp)
        v(pm, pmp) = eig.eigenvectors(pm * r * r + pmp, t);
    RoofFactor factor;
    factor.weight = lambda;
    for (auto& pair : nearest_kronecker_sum(v, r, r, r * r))
      factor.terms.push_back(KronTerm{std::move(pair.left), std::move(pair.right)});
    out.push_back(std::move(factor));
  }
  return out;
}

// Exponential chart for right-unitary matrices: U is the first r rows of
// exp(iH) with H Hermitian built from N^2 real parameters.
inline CMatrix right_unitary_from_params(Index r, Index N,
                                         std::span<const double> params) {
  if (N < r) throw std::invalid_argument("right_unitary_from_params: N must be >= r");
  if (static_cast<Index>(params.size()) != N * N)
    throw std::invalid_argument("right_unitary_from_params: need N^2 parameters");
  CMatrix h = CMatrix::Zero(N, N);
  std::size_t idx = 0;
  for (Index j = 0; j < N; ++j) h(j, j) = params[idx++];
  for (Index j = 0; j < N; ++j)
    for (Index k = j + 1; k < N; ++k) {
      const double re = params[idx++];
      const double im = params[idx++];
      h(j, k) = Complex(re, im);
      h(k, j) = Complex(re, -im);
    }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CVector phases =
      (Complex(0, 1) * es.eigenvalues().cast<Complex>()).array().exp();
  const CMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return u.topRows(r);
}

// Ensemble objective of the factored tensor at a given right-unitary U:
// sum_i ( sum_a weight_a | sum_m (U^T L_m U)_ii (U^T R_m U)_ii |^2 )^{1/4}.
// Equals sum_i p_i tau(psi_i) for the decomposition generated by U.
inline double roof_objective(std::span<const RoofFactor> factors, const CMatrix& u) {
  const Index r = u.rows();
  const Index big_n = u.cols();
  if ((u * u.adjoint() - CMatrix::Identity(r, r)).cwiseAbs().maxCoeff() > tol::numeric)
    throw std::invalid_argument("roof_objective: U is not right-unitary");
  double total = 0.0;
  for (Index i = 0; i < big_n; ++i) {
    const CVector col = u.col(i);
    double member = 0.0;
    for (const RoofFactor& factor : factors) {
      Complex g = 0.0;
      for (const KronTerm& term : factor.terms)
        g += (col.transpose() * term.left * col)(0) *
             (col.transpose() * term.right * col)(0);
      member += factor.weight * std::norm(g);
    }
    total += std::pow(std::max(member, 0.0), 0.25);
  }
  return total;
}

struct RoofResult {
  double upper_bound = 0.0;
  Index ensemble_size = 0;
  CMatrix unitary;  // r x N, U U^+ = I_r
  std::vector<std::pair<double, double>> per_member;  // (probability, tau)
};

namespace detail {

struct RoofState {
  std::vector<CVector> members;  // subnormalized 4n-vectors, columns of base*U
  std::vector<double> taus;      // tau of each subnormalized member
  CMatrix unitary;               // r x N
  double value = 0.0;
  Index n = 0;

  void rotate_pair(Index i, Index j, double theta, double phase) {
    const Complex c = std::cos(theta);
    const Complex sp = std::sin(theta) * std::exp(Complex(0, phase));
    const CVector a = c * members[static_cast<std::size_t>(i)] +
                      sp * members[static_cast<std::size_t>(j)];
    const CVector b = -std::conj(sp) * members[static_cast<std::size_t>(i)] +
                      c * members[static_cast<std::size_t>(j)];
    members[static_cast<std::size_t>(i)] = a;
    members[static_cast<std::size_t>(j)] = b;
    const CVector ui = unitary.col(i);
    const CVector uj = unitary.col(j);
    unitary.col(i) = c * ui + sp * uj;
    unitary.col(j) = -std::conj(sp) * ui + c * uj;
  }
};

// Local descent over one ensemble pair: coarse grid over the rotation angle
// and relative phase, then compass-search refinement.
inline bool optimize_pair(RoofState& st, Index i, Index j) {
  const CVector ci = st.members[static_cast<std::size_t>(i)];
  const CVector cj = st.members[static_cast<std::size_t>(j)];
  auto pair_value = [&](double theta, double phase) {
    const Complex c = std::cos(theta);
    const Complex sp = std::sin(theta) * std::exp(Complex(0, phase));
    const double ta = tau_of_flat(c * ci + sp * cj, st.n);
    const double tb = tau_of_flat(-std::conj(sp) * ci + c * cj, st.n);
    return ta + tb;
  };
  const double current = st.taus[static_cast<std::size_t>(i)] +
                         st.taus[static_cast<std::size_t>(j)];
  double best = current;
  double bt = 0.0, bp = 0.0;
  bool found = false;
  for (int a = 1; a <= 5; ++a)
    for (int b = 0; b < 8; ++b) {
      const double theta = a * (M_PI / 2.0) / 6.0;
      const double phase = b * (2.0 * M_PI) / 8.0;
      const double v = pair_value(theta, phase);
      if (v < best - 1e-12) {
        best = v;
        bt = theta;
        bp = phase;
        found = true;
      }
    }
  if (!found) return false;
  double step_t = 0.2, step_p = 0.4;
  for (int iter = 0; iter < 30; ++iter) {
    bool moved = false;
    const double dts[4][2] = {{step_t, 0.0}, {-step_t, 0.0}, {0.0, step_p}, {0.0, -step_p}};
    for (const auto& d : dts) {
      const double v = pair_value(bt + d[0], bp + d[1]);
      if (v < best - 1e-14) {
        best = v;
        bt += d[0];
        bp += d[1];
        moved = true;
        break;
      }
    }
    if (!moved) {
      step_t *= 0.5;
      step_p *= 0.5;
    }
  }
  if (best >= current - 1e-12) return false;
  st.rotate_pair(i, j, bt, bp);
  st.taus[static_cast<std::size_t>(i)] =
      tau_of_flat(st.members[static_cast<std::size_t>(i)], st.n);
  st.taus[static_cast<std::size_t>(j)] =
      tau_of_flat(st.members[static_cast<std::size_t>(j)], st.n);
  st.value += best - current;
  return true;
}

}  // namespace detail

// Convex-roof minimization over right-unitary ensembles by pairwise column
// rotations with multi-restart.  Restart 0 starts from the eigen-ensemble
// (U = [I_r | 0]), so the result never exceeds the eigen-ensemble average.
// Deterministic per seed; nonincreasing in restarts.
inline RoofResult minimize_roof(const DensityMatrix& rho, Index ensemble_size = 0,
                                Index restarts = 4, std::uint64_t seed = 0) {
  const Index n = rho.party_c_dim();
  const SpectralDecomposition sd = eigendecompose(rho);
  const Index r = sd.rank;
  if (r > kRoofRankBound)
    throw std::invalid_argument("minimize_roof: rank " + std::to_string(r) +
                                " exceeds bound " + std::to_string(kRoofRankBound) +
                                "; use the quasi-pure path (tau_a)");
  Index big_n = ensemble_size > 0 ? ensemble_size : 2 * r;
  if (big_n < r)
    throw std::invalid_argument("minimize_roof: ensemble size must be >= rank");
  if (restarts < 1) restarts = 1;

  CMatrix base(rho.dim(), r);  // column a = sqrt(u_a) |gamma_a>
  for (Index a = 0; a < r; ++a)
    base.col(a) = std::sqrt(sd.eigenvalues(a)) *
                  sd.eigenvectors[static_cast<std::size_t>(a)];

  detail::RoofState best;
  for (Index rs = 0; rs < restarts; ++rs) {
    detail::RoofState st;
    st.n = n;
    if (rs == 0) {
      st.unitary = CMatrix::Zero(r, big_n);
      st.unitary.leftCols(r) = CMatrix::Identity(r, r);
    } else {
      st.unitary = haar_unitary(big_n, seed + static_cast<std::uint64_t>(rs)).topRows(r);
    }
    st.members.resize(static_cast<std::size_t>(big_n));
    st.taus.resize(static_cast<std::size_t>(big_n));
    st.value = 0.0;
    for (Index i = 0; i < big_n; ++i) {
      st.members[static_cast<std::size_t>(i)] = base * st.unitary.col(i);
      st.taus[static_cast<std::size_t>(i)] =
          detail::tau_of_flat(st.members[static_cast<std::size_t>(i)], n);
      st.value += st.taus[static_cast<std::size_t>(i)];
    }
    bool improved = true;
    int sweeps = 0;
    while (improved && sweeps < 40) {
      improved = false;
      ++sweeps;
      for (Index i = 0; i < big_n; ++i)
        for (Index j = i + 1; j < big_n; ++j)
          if (detail::optimize_pair(st, i, j)) improved = true;
    }
    if (rs == 0 || st.value < best.value) best = std::move(st);
  }

  RoofResult out;
  out.ensemble_size = big_n;
  out.unitary = best.unitary;
  out.upper_bound = 0.0;
  out.per_member.reserve(static_cast<std::size_t>(big_n));
  for (Index i = 0; i < big_n; ++i) {
    const double p = best.members[static_cast<std::size_t>(i)].squaredNorm();
    const double t = best.taus[static_cast<std::size_t>(i)];
    // tau is degree-2 homogeneous: tau(theta) = p * tau(theta/sqrt(p))
    out.per_member.emplace_back(p, p > 1e-14 ? t / p : 0.0);
    out.upper_bound += t;
  }
  return out;
}

}  // namespace ttau
