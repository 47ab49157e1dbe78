#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ttau/numerics.hpp"

namespace ttau {

// Pure state of a (2 x 2 x n) system.  Amplitudes a_ijk are stored flattened
// with k fastest-varying: flat index = (2i + j) * n + k, so party-C operators
// act on contiguous blocks.
class PureState {
 public:
  PureState(Index n, CVector amplitudes) : n_(n), amps_(std::move(amplitudes)) {
    if (n_ < 1) throw std::invalid_argument("PureState: n must be >= 1");
    if (amps_.size() != 4 * n_)
      throw std::invalid_argument("PureState: amplitude count must be 4n");
    if (!amps_.allFinite())
      throw std::invalid_argument("PureState: non-finite amplitude");
    if (std::abs(amps_.squaredNorm() - 1.0) > tol::structural)
      throw std::invalid_argument("PureState: state not normalized, |norm^2 - 1| = " +
                                  std::to_string(std::abs(amps_.squaredNorm() - 1.0)));
  }

  Index n() const { return n_; }
  Index dim() const { return 4 * n_; }
  const CVector& vector() const { return amps_; }

  Complex amp(int i, int j, Index k) const { return amps_((2 * i + j) * n_ + k); }

  // Unnormalized two-qubit vectors |phi_k>, phi_k[2i+j] = a_ijk.
  std::vector<Eigen::Vector4cd> fibers() const {
    std::vector<Eigen::Vector4cd> out(static_cast<std::size_t>(n_));
    for (Index k = 0; k < n_; ++k)
      for (int ab = 0; ab < 4; ++ab)
        out[static_cast<std::size_t>(k)](ab) = amps_(ab * n_ + k);
    return out;
  }

 private:
  Index n_;
  CVector amps_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries) : rho_(std::move(entries)) {
    if (rho_.rows() != rho_.cols())
      throw std::invalid_argument("DensityMatrix: not square");
    if (rho_.rows() % 4 != 0)
      throw std::invalid_argument("DensityMatrix: dimension must be 4n");
    const double scale = std::max(1.0, rho_.cwiseAbs().maxCoeff());
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol::structural * scale)
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(rho_.trace().real() - 1.0) > tol::structural ||
        std::abs(rho_.trace().imag()) > tol::structural)
      throw std::invalid_argument("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol::numeric)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }

  Index dim() const { return rho_.rows(); }
  Index party_c_dim() const { return rho_.rows() / 4; }
  const CMatrix& entries() const { return rho_; }

 private:
  CMatrix rho_;
};

struct SpectralDecomposition {
  RVector eigenvalues;              // descending, clamped at 0, sum to 1
  std::vector<CVector> eigenvectors;
  Index rank = 0;                   // eigenvalues above cutoff

  CMatrix reassemble() const {
    const Index d = eigenvectors.empty() ? 0 : eigenvectors.front().size();
    CMatrix out = CMatrix::Zero(d, d);
    for (Index k = 0; k < eigenvalues.size(); ++k)
      out += eigenvalues(k) * (eigenvectors[static_cast<std::size_t>(k)] *
                               eigenvectors[static_cast<std::size_t>(k)].adjoint());
    return out;
  }
};

inline SpectralDecomposition eigendecompose(const DensityMatrix& rho,
                                            double cutoff = 1e-12) {
  const HermitianEig eig = hermitian_eig(rho.entries());
  if (eig.eigenvalues.minCoeff() < -tol::numeric)
    throw std::invalid_argument("eigendecompose: nonphysical negative eigenvalue");
  SpectralDecomposition sd;
  const Index d = rho.dim();
  sd.eigenvalues = eig.eigenvalues.cwiseMax(0.0);
  sd.eigenvectors.reserve(static_cast<std::size_t>(d));
  for (Index k = 0; k < d; ++k) sd.eigenvectors.push_back(eig.eigenvectors.col(k));
  const double top = sd.eigenvalues(0);
  sd.rank = 0;
  for (Index k = 0; k < d; ++k)
    if (sd.eigenvalues(k) > cutoff * std::max(1.0, top)) ++sd.rank;
  return sd;
}

// --- named state families -------------------------------------------------

inline PureState ghz_222() {
  CVector a = CVector::Zero(8);
  a(0) = a(7) = 1.0 / std::sqrt(2.0);  // |000> + |111>, n = 2
  return PureState(2, a);
}

inline PureState w_222() {
  CVector a = CVector::Zero(8);
  const double c = 1.0 / std::sqrt(3.0);
  // |001> + |010> + |100>, flat index (2i+j)*2 + k
  a(1) = c;  // i=0 j=0 k=1
  a(2) = c;  // i=0 j=1 k=0
  a(4) = c;  // i=1 j=0 k=0
  return PureState(2, a);
}

inline PureState ghz_prime() {
  CVector a = CVector::Zero(12);
  // (|000> + |101> + |011> + |112>) / 2, flat index (2i+j)*3 + k
  a(0) = a(7) = a(4) = a(11) = 0.5;
  return PureState(3, a);
}

inline PureState w_prime() {
  CVector a = CVector::Zero(12);
  const double c = 1.0 / std::sqrt(3.0);
  a(0) = a(4) = a(11) = c;  // |000> + |011> + |112>
  return PureState(3, a);
}

// --- constructors ---------------------------------------------------------

inline PureState semiseparable_ab_c(const Eigen::Vector4cd& phi_ab,
                                    const CVector& chi_c) {
  if (phi_ab.norm() < tol::structural || chi_c.norm() < tol::structural)
    throw std::invalid_argument("semiseparable_ab_c: zero factor vector");
  const Index n = chi_c.size();
  CVector a(4 * n);
  for (int ab = 0; ab < 4; ++ab)
    for (Index k = 0; k < n; ++k) a(ab * n + k) = phi_ab(ab) * chi_c(k);
  a /= a.norm();
  return PureState(n, a);
}

inline PureState semiseparable_a_bc(const Eigen::Vector2cd& chi_a,
                                    const CVector& phi_bc) {
  if (chi_a.norm() < tol::structural || phi_bc.norm() < tol::structural)
    throw std::invalid_argument("semiseparable_a_bc: zero factor vector");
  if (phi_bc.size() % 2 != 0)
    throw std::invalid_argument("semiseparable_a_bc: BC factor dimension must be 2n");
  const Index n = phi_bc.size() / 2;
  CVector a(4 * n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (Index k = 0; k < n; ++k)
        a((2 * i + j) * n + k) = chi_a(i) * phi_bc(j * n + k);
  a /= a.norm();
  return PureState(n, a);
}

inline PureState random_pure(Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_pure: n must be >= 1");
  GaussianStream g(seed);
  CVector a(4 * n);
  for (Index i = 0; i < 4 * n; ++i) a(i) = g.next_complex();
  a /= a.norm();
  return PureState(n, a);
}

inline DensityMatrix pure_projector(const PureState& s) {
  return DensityMatrix(s.vector() * s.vector().adjoint());
}

// x |s><s| + (1-x) I/(4n).  The identity term is trace-normalized so the
// result is a density matrix for every x.
inline DensityMatrix isotropic_mix(const PureState& s, double x) {
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("isotropic_mix: x must be in [0,1]");
  const Index d = s.dim();
  CMatrix rho = x * (s.vector() * s.vector().adjoint());
  rho += ((1.0 - x) / static_cast<double>(d)) * CMatrix::Identity(d, d);
  return DensityMatrix(rho);
}

// --- file IO ----------------------------------------------------------------
//
// State files:   line 1 "dims 2 2 <n>", then "<i> <j> <k> <re> <im>" for each
// nonzero amplitude (omitted entries are zero).
// Density files: line 1 "density <dim>", then "<row> <col> <re> <im>" for the
// upper triangle; Hermiticity fills the lower triangle.

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& what)
      : std::runtime_error("parse error at line " + std::to_string(line_no) +
                           ": " + what),
        line(line_no) {}
};

inline PureState read_state(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty file");
  ++line_no;
  std::istringstream head(line);
  std::string tag;
  Index d1 = 0, d2 = 0, n = 0;
  if (!(head >> tag >> d1 >> d2 >> n) || tag != "dims" || d1 != 2 || d2 != 2 || n < 1)
    throw ParseError(line_no, "expected header 'dims 2 2 <n>'");
  CVector a = CVector::Zero(4 * n);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    int i = 0, j = 0;
    Index k = 0;
    double re = 0.0, im = 0.0;
    if (!(row >> i >> j >> k >> re >> im) || i < 0 || i > 1 || j < 0 || j > 1 ||
        k < 0 || k >= n)
      throw ParseError(line_no, "expected '<i> <j> <k> <re> <im>'");
    a((2 * i + j) * n + k) = Complex(re, im);
  }
  const double norm2 = a.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol::structural)
    throw std::runtime_error("state not normalized: |amplitudes|^2 = " +
                             std::to_string(norm2));
  return PureState(n, a);
}

inline void write_state(std::ostream& out, const PureState& s) {
  out << "dims 2 2 " << s.n() << "\n";
  out.precision(17);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (Index k = 0; k < s.n(); ++k) {
        const Complex v = s.amp(i, j, k);
        if (std::abs(v) == 0.0) continue;
        out << i << " " << j << " " << k << " " << v.real() << " " << v.imag()
            << "\n";
      }
}

inline DensityMatrix read_density(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty file");
  ++line_no;
  std::istringstream head(line);
  std::string tag;
  Index dim = 0;
  if (!(head >> tag >> dim) || tag != "density" || dim < 4 || dim % 4 != 0)
    throw ParseError(line_no, "expected header 'density <dim>' with dim = 4n");
  CMatrix rho = CMatrix::Zero(dim, dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    Index r = 0, c = 0;
    double re = 0.0, im = 0.0;
    if (!(row >> r >> c >> re >> im) || r < 0 || c < r || c >= dim)
      throw ParseError(line_no, "expected upper-triangle '<row> <col> <re> <im>'");
    rho(r, c) = Complex(re, im);
    if (r != c) rho(c, r) = std::conj(rho(r, c));
  }
  return DensityMatrix(rho);
}

inline void write_density(std::ostream& out, const DensityMatrix& rho) {
  out << "density " << rho.dim() << "\n";
  out.precision(17);
  for (Index r = 0; r < rho.dim(); ++r)
    for (Index c = r; c < rho.dim(); ++c) {
      const Complex v = rho.entries()(r, c);
      if (std::abs(v) == 0.0) continue;
      out << r << " " << c << " " << v.real() << " " << v.imag() << "\n";
    }
}

}  // namespace ttau
