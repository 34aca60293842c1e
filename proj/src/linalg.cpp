#include "stray/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <lapacke.h>

namespace stray {

EigenPairs symmetric_eigen(const Mat& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  EigenPairs out;
  out.vectors = a;
  out.values.resize(n);
  if (n == 0) return out;
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n,
                                   out.values.data());
  if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
  return out;
}

EigenPairs symmetric_eigen_lowest(const Mat& a, int k) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (k >= n) return symmetric_eigen(a);
  Mat work = a;
  EigenPairs out;
  out.values.resize(n);
  out.vectors.resize(n, k);
  lapack_int found = 0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, work.data(), n, 0.0, 0.0, 1, k, 0.0,
                                   &found, out.values.data(), out.vectors.data(), n, support.data());
  if (info != 0 || found != k) throw std::runtime_error("dsyevr failed, info=" + std::to_string(info));
  out.values.conservativeResize(k);
  return out;
}

std::vector<std::vector<int>> block_structure(const Mat& a, double tol) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i)
      if (std::abs(a(i, j)) > tol) {
        int ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
  std::vector<int> slot(n, -1);
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[r]].push_back(i);
  }
  return blocks;
}

// Hungarian algorithm (shortest augmenting path, potentials) on cost = -weight.
std::vector<int> max_weight_assignment(const Mat& weight) {
  const int n = static_cast<int>(weight.rows());
  const int m = static_cast<int>(weight.cols());
  if (n > m) throw std::invalid_argument("assignment needs rows <= cols");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = -weight(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

Polar polar_factor(const Mat& x) {
  Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Polar out;
  out.unitary = svd.matrixU() * svd.matrixV().transpose();
  out.min_singular = svd.singularValues().size() ? svd.singularValues().minCoeff() : 0.0;
  return out;
}

}  // namespace stray
