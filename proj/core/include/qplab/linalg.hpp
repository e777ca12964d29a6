#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qplab {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

// Hermitian band matrix stored by lower diagonals: lower[k][i] = H(i + k, i),
// k = 0..bandwidth, i = 0..n-k-1. The diagonal must be real.
struct BandedHermitian {
  int n = 0;
  int bandwidth = 0;
  std::vector<std::vector<cplx>> lower;

  BandedHermitian(int size, int bw);
  bool is_real() const;
  MatC dense() const;
};

struct EigenSystem {
  std::vector<double> values;  // ascending
  // Column j is the unit eigenvector of values[j]; empty unless requested.
  Eigen::MatrixXd vectors_real;
  MatC vectors;
};

// Eigenvalues (and optionally eigenvectors) via LAPACK dsbevd / zhbevd.
EigenSystem eigh_banded(const BandedHermitian& h, bool want_vectors);

// Real symmetric tridiagonal eigenvalues via dstev.
std::vector<double> eigvalsh_tridiagonal(std::vector<double> diag, std::vector<double> off);

// Dense real symmetric eigenvalues via dsyevd.
std::vector<double> eigvalsh_dense(const Eigen::MatrixXd& m);

double operator_norm(const MatC& m);

// Two-sided Hausdorff distance of finite point sets on the line.
double hausdorff_distance(std::vector<double> a, std::vector<double> b);

// Distance from x to the nearest point of a sorted set.
double distance_to_sorted(const std::vector<double>& sorted, double x);

}  // namespace qplab
