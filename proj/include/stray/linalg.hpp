#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace stray {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

struct EigenPairs {
  Vec values;  // ascending
  Mat vectors; // columns
};

// Dense real-symmetric eigensolver (LAPACK dsyevd). Only the lower triangle is read.
EigenPairs symmetric_eigen(const Mat& a);

// The k lowest eigenpairs only (LAPACK dsyevr).
EigenPairs symmetric_eigen_lowest(const Mat& a, int k);

// Connected components of the sparsity graph of a symmetric matrix. Entries
// with |a_ij| <= tol are treated as structural zeros. Components are sorted by
// their smallest index and each lists its indices in ascending order.
std::vector<std::vector<int>> block_structure(const Mat& a, double tol = 0.0);

// Rectangular assignment maximizing the summed weight. Returns, for every row,
// the chosen column. Requires rows <= cols.
std::vector<int> max_weight_assignment(const Mat& weight);

// Unitary polar factor W of X = W P, with the smallest singular value of X.
struct Polar {
  Mat unitary;
  double min_singular = 0.0;
};
Polar polar_factor(const Mat& x);

}  // namespace stray
