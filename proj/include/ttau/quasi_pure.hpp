#pragma once

#include <iostream>

#include "ttau/tau_mixed.hpp"

namespace ttau {

struct KappaMatrix {
  Index r = 0;
  CMatrix entries;            // r x r, complex symmetric
  double eigenvalue_gap = 0;  // u_1 - u_2 of the source density matrix
};

// Second-order quasi-pure matrix: kappa_pm = A^{pm,11}_{11,11} / (A^{11,11}_{11,11})^{3/4},
// with "1" the dominant eigenvector.  Only the O(r^2 n^2) brackets against the
// dominant eigenvector are needed; the full tensor is never built.
inline KappaMatrix build_kappa(const SpectralDecomposition& sd, Index n) {
  const Index r = sd.rank;
  if (r < 1) throw std::invalid_argument("build_kappa: empty decomposition");
  const double gap =
      sd.eigenvalues.size() > 1 ? sd.eigenvalues(0) - sd.eigenvalues(1) : 1.0;
  if (r > 1 && gap < 1e-8)
    std::cerr << "build_kappa: warning: dominant eigenvalue nearly degenerate "
                 "(gap "
              << gap << "); quasi-pure premise violated\n";

  // bracket(p)[i,j] = sqrt(u_p u_1) <gamma_p*| Sigma_ij |gamma_1>
  const CMatrix ss = spin_flip_form().cast<Complex>();
  const CMatrix phi1 = detail::phi_of_flat(sd.eigenvectors[0], n);
  std::vector<CMatrix> g(static_cast<std::size_t>(r));
  for (Index p = 0; p < r; ++p)
    g[static_cast<std::size_t>(p)] =
        std::sqrt(sd.eigenvalues(p) * sd.eigenvalues(0)) *
        (detail::phi_of_flat(sd.eigenvectors[static_cast<std::size_t>(p)], n)
             .transpose() *
         ss * phi1);

  double a1111 = 0.0;
  CMatrix k = CMatrix::Zero(r, r);
  const CMatrix& g1 = g[0];
  for (Index i = 0; i < n; ++i)
    for (Index l = 0; l < n; ++l) {
      if (i == l) continue;
      for (Index j = 0; j < n; ++j)
        for (Index kk = 0; kk < n; ++kk) {
          if (j == kk) continue;
          const Complex f11 = g1(i, j) * g1(l, kk) - g1(i, kk) * g1(l, j);
          a1111 += std::norm(f11);
          for (Index p = 0; p < r; ++p)
            for (Index m = 0; m < r; ++m)
              k(p, m) += (g[static_cast<std::size_t>(p)](i, j) *
                              g[static_cast<std::size_t>(m)](l, kk) -
                          g[static_cast<std::size_t>(p)](i, kk) *
                              g[static_cast<std::size_t>(m)](l, j)) *
                         std::conj(f11);
        }
    }
  if (a1111 <= 1e-14)
    throw std::runtime_error(
        "build_kappa: A^{11,11}_{11,11} vanishes (the dominant eigenvector has "
        "tau ~ 0); kappa is undefined");
  k /= std::pow(a1111, 0.75);
  return KappaMatrix{r, std::move(k), gap};
}

// tau_a from the singular values of kappa: max{lambda_1 - sum_{i>1} lambda_i, 0}.
inline double tau_quasi(const KappaMatrix& k) {
  const SvdResult sv = svd(k.entries);
  const double rest = sv.singulars.sum() - sv.singulars(0);
  return std::max(sv.singulars(0) - rest, 0.0);
}

// Analytic quasi-pure approximation of the convex roof.
inline double tau_a(const DensityMatrix& rho, Index n) {
  if (rho.dim() != 4 * n)
    throw std::invalid_argument("tau_a: density dimension is not 4n");
  return tau_quasi(build_kappa(eigendecompose(rho), n));
}

struct SweepRecord {
  double x = 0.0;
  double tau_a = 0.0;
  std::string state_tag;
  bool ok = true;
};

inline std::vector<SweepRecord> fig1_sweep(const PureState& s,
                                           const std::string& tag, double x_min,
                                           double x_max, Index steps) {
  if (steps < 1) throw std::invalid_argument("fig1_sweep: steps must be >= 1");
  if (x_min < 0.0 || x_max > 1.0 || x_min > x_max)
    throw std::invalid_argument("fig1_sweep: range must satisfy 0 <= x_min <= x_max <= 1");
  std::vector<SweepRecord> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (Index i = 0; i < steps; ++i) {
    const double x =
        steps == 1 ? x_min : x_min + (x_max - x_min) * static_cast<double>(i) /
                                         static_cast<double>(steps - 1);
    SweepRecord rec;
    rec.x = x;
    rec.state_tag = tag;
    try {
      rec.tau_a = tau_a(isotropic_mix(s, x), s.n());
    } catch (const std::exception&) {
      rec.ok = false;
      rec.tau_a = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::vector<SweepRecord> fig1_sweep(const std::string& state_tag,
                                           double x_min, double x_max,
                                           Index steps) {
  if (state_tag == "ghz-prime") return fig1_sweep(ghz_prime(), state_tag, x_min, x_max, steps);
  if (state_tag == "w-prime") return fig1_sweep(w_prime(), state_tag, x_min, x_max, steps);
  throw std::invalid_argument("fig1_sweep: unknown state tag '" + state_tag + "'");
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "x,tau_a,state\n";
  char buf[64];
  for (const SweepRecord& rec : records) {
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g,", rec.x, rec.tau_a);
    out << buf << rec.state_tag << "\n";
  }
}

}  // namespace ttau
