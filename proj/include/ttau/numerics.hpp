#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ttau {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index   = Eigen::Index;

namespace tol {
// structural checks (hermiticity, symmetry, normalization)
inline constexpr double structural = 1e-12;
// numerical equalities (reconstruction, residuals, cross-path checks)
inline constexpr double numeric = 1e-10;
}  // namespace tol

struct SvdResult {
  CMatrix left;           // columns orthonormal
  RVector singulars;      // descending, >= 0
  CMatrix right_adjoint;  // rows orthonormal

  CMatrix reconstruct() const {
    return left * singulars.asDiagonal() * right_adjoint;
  }
};

inline SvdResult svd(const CMatrix& m) {
  if (!m.allFinite()) throw std::invalid_argument("svd: input has NaN/Inf entries");
  Eigen::JacobiSVD<CMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("svd: Jacobi iteration failed to converge");
  return SvdResult{solver.matrixU(), solver.singularValues(),
                   solver.matrixV().adjoint()};
}

struct HermitianEig {
  RVector eigenvalues;  // descending
  CMatrix eigenvectors; // columns, orthonormal, matching order
};

inline HermitianEig hermitian_eig(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eig: matrix not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (((m - m.adjoint()).cwiseAbs().maxCoeff()) > tol::structural * scale)
    throw std::invalid_argument("hermitian_eig: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  // Eigen returns ascending order; flip to descending.
  const Index n = m.rows();
  HermitianEig out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k)
    out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  return out;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct KronPair {
  CMatrix left;
  CMatrix right;
};

// Nearest-Kronecker-product decomposition by index rearrangement + SVD
// (Van Loan / Pitsianis).  block_rows x block_cols is the shape of the
// right factors; a = sum_i kron(left_i, right_i) with the truncation error
// given by the discarded singular values.
inline std::vector<KronPair> nearest_kronecker_sum(const CMatrix& a,
                                                   Index block_rows,
                                                   Index block_cols,
                                                   Index terms) {
  if (block_rows < 1 || block_cols < 1 || a.rows() % block_rows != 0 ||
      a.cols() % block_cols != 0)
    throw std::invalid_argument("nearest_kronecker_sum: block shape incompatible with input");
  const Index lr = a.rows() / block_rows;
  const Index lc = a.cols() / block_cols;
  // Rearranged matrix: row (i,j) over the coarse grid, column (k,l) over the
  // block, entry a[i*br+k, j*bc+l].
  CMatrix r(lr * lc, block_rows * block_cols);
  for (Index i = 0; i < lr; ++i)
    for (Index j = 0; j < lc; ++j)
      for (Index k = 0; k < block_rows; ++k)
        for (Index l = 0; l < block_cols; ++l)
          r(i * lc + j, k * block_cols + l) = a(i * block_rows + k, j * block_cols + l);

  const SvdResult sv = svd(r);
  const Index rank = sv.singulars.size();
  const double cutoff = 1e-15 * std::max(1.0, sv.singulars(0));
  std::vector<KronPair> out;
  for (Index t = 0; t < std::min(terms, rank); ++t) {
    if (sv.singulars(t) <= cutoff) break;
    KronPair term;
    term.left.resize(lr, lc);
    term.right.resize(block_rows, block_cols);
    for (Index i = 0; i < lr; ++i)
      for (Index j = 0; j < lc; ++j)
        term.left(i, j) = sv.singulars(t) * sv.left(i * lc + j, t);
    for (Index k = 0; k < block_rows; ++k)
      for (Index l = 0; l < block_cols; ++l)
        term.right(k, l) = sv.right_adjoint(t, k * block_cols + l);
    out.push_back(std::move(term));
  }
  return out;
}

// Deterministic standard-normal stream (Box-Muller over mt19937_64), so the
// same seed gives the same numbers on every platform.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }

  Complex next_complex() {
    const double re = next();
    const double im = next();
    return Complex(re, im);
  }

  // uniform on [0,1)
  double uniform() {
    return std::ldexp(static_cast<double>(engine_() >> 11), -53);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline CMatrix haar_unitary(Index dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be >= 1");
  GaussianStream g(seed);
  CMatrix ginibre(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) ginibre(i, j) = g.next_complex();
  Eigen::HouseholderQR<CMatrix> qr(ginibre);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar.
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

}  // namespace ttau
