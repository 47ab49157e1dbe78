#pragma once

#include "ttau/states.hpp"

namespace ttau {

// sigma_y (x) sigma_y in the two-qubit computational basis: real, symmetric,
// antidiagonal (-1, 1, 1, -1).
inline const Eigen::Matrix4d& spin_flip_form() {
  static const Eigen::Matrix4d m = [] {
    Eigen::Matrix4d f = Eigen::Matrix4d::Zero();
    f(0, 3) = -1.0;
    f(1, 2) = 1.0;
    f(2, 1) = 1.0;
    f(3, 0) = -1.0;
    return f;
  }();
  return m;
}

// <x*| sigma_y (x) sigma_y |y>: bilinear and symmetric in (x, y).
inline Complex tilde_inner(const Eigen::Vector4cd& x, const Eigen::Vector4cd& y) {
  return -x(0) * y(3) + x(1) * y(2) + x(2) * y(1) - x(3) * y(0);
}

// 4 x n matrix whose column k is the fiber |phi_k>.
inline CMatrix build_phi(const PureState& s) {
  CMatrix phi(4, s.n());
  for (int ab = 0; ab < 4; ++ab)
    for (Index k = 0; k < s.n(); ++k) phi(ab, k) = s.vector()(ab * s.n() + k);
  return phi;
}

// Tilde-Gram matrix of the fibers: M = Phi^T (sigma_y (x) sigma_y) Phi.
// Complex symmetric; deliberately not normalized.
inline CMatrix build_tilde_gram_from_phi(const CMatrix& phi) {
  return phi.transpose() * spin_flip_form() * phi;
}

inline CMatrix build_tilde_gram(const PureState& s) {
  return build_tilde_gram_from_phi(build_phi(s));
}

// I-concurrence of a matrix-form bipartite vector:
// sqrt(2 [ (tr M M^+)^2 - tr (M M^+)^2 ]).  Scales as |c|^2 under M -> c M.
//
// Evaluated through the singular values s_i of M as 4 sum_{i<j} s_i^2 s_j^2,
// which is the same quantity without the catastrophic cancellation of the
// trace-difference form: on (numerically) rank-1 input the difference of
// traces only cancels to ~1e-16, which after two square roots inflates to
// ~1e-4 in tau.  Singular values below 1e-13 * s_max are rounding artifacts
// of an exactly rank-deficient matrix and are dropped.
inline double i_concurrence(const CMatrix& m) {
  if (!m.allFinite()) throw std::invalid_argument("i_concurrence: non-finite input");
  const RVector s = svd(m).singulars;
  const double cutoff = 1e-13 * (s.size() > 0 ? s(0) : 0.0);
  double radicand = 0.0;
  for (Index i = 0; i < s.size(); ++i)
    for (Index j = i + 1; j < s.size(); ++j) {
      if (s(j) <= cutoff) break;
      radicand += 4.0 * s(i) * s(i) * s(j) * s(j);
    }
  return std::sqrt(radicand);
}

// Components C_{ab} = <Psi*| s_a (x) s_b |Psi> over the unnormalized SO(n)
// generators (s_ij)_{kl} = d_ik d_jl - d_il d_jk, index pairs i<j.  The
// squared length equals i_concurrence(m)^2.
inline std::vector<Complex> concurrence_vector(const CMatrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("concurrence_vector: matrix must be square");
  const Index n = m.rows();
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n * (n - 1) / 2 * (n * (n - 1) / 2)));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index l = k + 1; l < n; ++l)
          out.push_back(2.0 * (m(i, k) * m(j, l) - m(i, l) * m(j, k)));
  return out;
}

namespace detail {
// tau^4 of a (possibly unnormalized) state given by its 4 x n fiber matrix.
// tau is degree-2 homogeneous, so sum_i p_i tau(psi_i) over an ensemble equals
// sum_i tau(theta_i) with theta_i the subnormalized members.
inline double tau_fourth_from_phi(const CMatrix& phi) {
  const double ci = i_concurrence(build_tilde_gram_from_phi(phi));
  return ci * ci;
}

inline CMatrix phi_of_flat(const CVector& v, Index n) {
  CMatrix phi(4, n);
  for (int ab = 0; ab < 4; ++ab)
    for (Index k = 0; k < n; ++k) phi(ab, k) = v(ab * n + k);
  return phi;
}

inline double tau_of_flat(const CVector& v, Index n) {
  return std::pow(tau_fourth_from_phi(phi_of_flat(v, n)), 0.25);
}
}  // namespace detail

// Genuine tripartite entanglement semi-monotone: tau = sqrt(C_I(M)).
inline double tau(const PureState& s) {
  return std::sqrt(i_concurrence(build_tilde_gram(s)));
}

// Independent computational path: expand tau directly on the full 4n-vector
// with the operators Sigma_ij = sigma_y (x) sigma_y (x) e_ij, then take the
// fourth root of the antisymmetrized bracket sum.
inline double tau_expanded(const PureState& s) {
  const Index n = s.n();
  const CVector& psi = s.vector();
  CMatrix ss = spin_flip_form().cast<Complex>();
  // brackets[i][j] = <psi*| Sigma_ij |psi>
  CMatrix brackets(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      CMatrix e = CMatrix::Zero(n, n);
      e(i, j) = 1.0;
      brackets(i, j) = psi.transpose() * kron(ss, e) * psi;
    }
  double sum = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index l = 0; l < n; ++l) {
      if (i == l) continue;
      for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k) {
          if (j == k) continue;
          const Complex term =
              brackets(i, j) * brackets(l, k) - brackets(i, k) * brackets(l, j);
          sum += std::norm(term);
        }
    }
  return std::pow(sum, 0.25);
}

// Coffman-Kundu-Wootters residual entanglement (three-tangle) of a three-qubit
// pure state, via the Cayley hyperdeterminant closed form.  Oracle for the
// (2,2,2) reduction: tau^2 = three_tangle / 2.
inline double three_tangle(const PureState& s) {
  if (s.n() != 2)
    throw std::invalid_argument("three_tangle: defined only for n = 2");
  auto a = [&](int i, int j, int k) { return s.amp(i, j, k); };
  const Complex d1 = a(0, 0, 0) * a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 1) +
                     a(0, 0, 1) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 0) +
                     a(0, 1, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 0, 1) +
                     a(1, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(0, 1, 1);
  const Complex d2 = a(0, 0, 0) * a(1, 1, 1) * a(0, 1, 1) * a(1, 0, 0) +
                     a(0, 0, 0) * a(1, 1, 1) * a(1, 0, 1) * a(0, 1, 0) +
                     a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 0) * a(0, 0, 1) +
                     a(0, 1, 1) * a(1, 0, 0) * a(1, 0, 1) * a(0, 1, 0) +
                     a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 0) * a(0, 0, 1) +
                     a(1, 0, 1) * a(0, 1, 0) * a(1, 1, 0) * a(0, 0, 1);
  const Complex d3 = a(0, 0, 0) * a(1, 1, 0) * a(1, 0, 1) * a(0, 1, 1) +
                     a(1, 1, 1) * a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0);
  return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

}  // namespace ttau
