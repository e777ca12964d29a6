#include "qplab/linalg.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "qplab/error.hpp"

namespace qplab {

BandedHermitian::BandedHermitian(int size, int bw) : n(size), bandwidth(bw) {
  require(size > 0 && bw >= 0 && bw < size, ErrorKind::Shape, "invalid band matrix shape");
  lower.resize(bw + 1);
  for (int k = 0; k <= bw; ++k) lower[k].assign(size - k, 0.0);
}

bool BandedHermitian::is_real() const {
  for (const auto& band : lower) {
    for (const auto& z : band) {
      if (z.imag() != 0.0) return false;
    }
  }
  return true;
}

MatC BandedHermitian::dense() const {
  MatC m = MatC::Zero(n, n);
  for (int k = 0; k <= bandwidth; ++k) {
    for (int i = 0; i + k < n; ++i) {
      m(i + k, i) = lower[k][i];
      m(i, i + k) = std::conj(lower[k][i]);
    }
  }
  return m;
}

EigenSystem eigh_banded(const BandedHermitian& h, bool want_vectors) {
  const lapack_int n = h.n;
  const lapack_int kd = h.bandwidth;
  const lapack_int ldab = kd + 1;
  const char jobz = want_vectors ? 'V' : 'N';
  EigenSystem out;
  out.values.resize(n);

  if (h.is_real()) {
    // Lower storage, column major: ab[k + j*ldab] = H(j + k, j).
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (int k = 0; k <= kd; ++k) {
      for (int j = 0; j + k < n; ++j) ab[k + j * ldab] = h.lower[k][j].real();
    }
    if (want_vectors) out.vectors_real.resize(n, n);
    const lapack_int info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, jobz, 'L', n, kd, ab.data(), ldab,
                                           out.values.data(),
                                           want_vectors ? out.vectors_real.data() : nullptr,
                                           want_vectors ? n : 1);
    require(info == 0, ErrorKind::NumericalQuality, "dsbevd failed, info=" + std::to_string(info));
    if (want_vectors) out.vectors = out.vectors_real.cast<cplx>();
    return out;
  }

  std::vector<lapack_complex_double> ab(static_cast<std::size_t>(ldab) * n);
  for (int k = 0; k <= kd; ++k) {
    for (int j = 0; j + k < n; ++j) {
      const cplx& z = h.lower[k][j];
      ab[k + j * ldab] = z;
    }
  }
  std::vector<lapack_complex_double> z(want_vectors ? static_cast<std::size_t>(n) * n : 1);
  const lapack_int info =
      LAPACKE_zhbevd(LAPACK_COL_MAJOR, jobz, 'L', n, kd, ab.data(), ldab, out.values.data(),
                     z.data(), want_vectors ? n : 1);
  require(info == 0, ErrorKind::NumericalQuality, "zhbevd failed, info=" + std::to_string(info));
  if (want_vectors) {
    out.vectors.resize(n, n);
    for (lapack_int j = 0; j < n; ++j) {
      for (lapack_int i = 0; i < n; ++i) {
        out.vectors(i, j) = z[i + j * n];
      }
    }
  }
  return out;
}

std::vector<double> eigvalsh_tridiagonal(std::vector<double> diag, std::vector<double> off) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  require(n > 0 && off.size() + 1 >= diag.size(), ErrorKind::Shape, "tridiagonal shape mismatch");
  off.resize(std::max<std::size_t>(1, diag.size()));
  const lapack_int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', n, diag.data(), off.data(), nullptr, 1);
  require(info == 0, ErrorKind::NumericalQuality, "dstev failed, info=" + std::to_string(info));
  return diag;
}

std::vector<double> eigvalsh_dense(const Eigen::MatrixXd& m) {
  require(m.rows() == m.cols(), ErrorKind::Shape, "matrix must be square");
  const lapack_int n = static_cast<lapack_int>(m.rows());
  Eigen::MatrixXd a = m;
  std::vector<double> w(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
  require(info == 0, ErrorKind::NumericalQuality, "dsyevd failed, info=" + std::to_string(info));
  return w;
}

double operator_norm(const MatC& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatC> svd(m);
  return svd.singularValues()(0);
}

double distance_to_sorted(const std::vector<double>& sorted, double x) {
  if (sorted.empty()) return std::numeric_limits<double>::infinity();
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  double best = std::numeric_limits<double>::infinity();
  if (it != sorted.end()) best = std::abs(*it - x);
  if (it != sorted.begin()) best = std::min(best, std::abs(*std::prev(it) - x));
  return best;
}

double hausdorff_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  for (double x : a) d = std::max(d, distance_to_sorted(b, x));
  for (double y : b) d = std::max(d, distance_to_sorted(a, y));
  return d;
}

}  // namespace qplab
