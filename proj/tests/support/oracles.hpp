// Copyright 2026 The augimpact Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Reference implementations written straight from the definitions. They are
// slow on purpose and share no code with the library.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "augimpact/cka.hpp"
#include "augimpact/matrix.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const augimpact::Matrix2D& m) {
  Dense d(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  }
  return d;
}

inline Dense to_dense(const augimpact::GramMatrix& g) {
  Dense d(g.n(), std::vector<double>(g.n()));
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (std::size_t j = 0; j < g.n(); ++j) d[i][j] = g(i, j);
  }
  return d;
}

inline Dense matmul(const Dense& a, const Dense& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Dense c(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][p] * b[p][j];
    }
  }
  return c;
}

inline Dense transpose(const Dense& a) {
  Dense t(a.empty() ? 0 : a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

inline double trace(const Dense& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

inline Dense centering(std::size_t n) {
  Dense h(n, std::vector<double>(n, -1.0 / static_cast<double>(n)));
  for (std::size_t i = 0; i < n; ++i) h[i][i] += 1.0;
  return h;
}

/// trace(K H L H) / (n - 1)^2 with H materialized.
inline double hsic_biased(const Dense& k, const Dense& l) {
  const Dense h = centering(k.size());
  const double n1 = static_cast<double>(k.size()) - 1.0;
  return trace(matmul(matmul(matmul(k, h), l), h)) / (n1 * n1);
}

/// The U-statistic over ordered quadruples of distinct indices:
///   mean of k_ij l_ij + k_ij l_qr - 2 k_ij l_iq.
inline double hsic_unbiased_quadruples(const Dense& k, const Dense& l) {
  const std::size_t n = k.size();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t q = 0; q < n; ++q) {
        if (q == i || q == j) continue;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == i || r == j || r == q) continue;
          sum += k[i][j] * l[i][j] + k[i][j] * l[q][r] - 2.0 * k[i][j] * l[i][q];
          ++count;
        }
      }
    }
  }
  return sum / static_cast<double>(count);
}

/// Term-by-term evaluation of the closed form with explicit loops over the
/// diagonal-zeroed matrices.
inline double hsic_unbiased_direct(const Dense& k, const Dense& l) {
  const std::size_t n = k.size();
  const double nd = static_cast<double>(n);
  double tr = 0.0, sk = 0.0, sl = 0.0, skl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      tr += k[i][j] * l[j][i];
      sk += k[i][j];
      sl += l[i][j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t m = 0; m < n; ++m) {
        if (m == i || m == j) continue;
        skl += k[i][m] * l[m][j];
      }
    }
  }
  return (tr + sk * sl / ((nd - 1) * (nd - 2)) - 2.0 / (nd - 2) * skl) / (nd * (nd - 3));
}

/// Linear CKA in feature space: |Yc^T Xc|_F^2 / (|Xc^T Xc|_F |Yc^T Yc|_F).
inline double feature_cka(const augimpact::Matrix2D& xm, const augimpact::Matrix2D& ym) {
  auto center = [](Dense d) {
    const std::size_t n = d.size();
    for (std::size_t j = 0; j < (n ? d[0].size() : 0); ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += d[i][j];
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) d[i][j] -= mean;
    }
    return d;
  };
  auto frob2 = [](const Dense& a) {
    double s = 0.0;
    for (const auto& row : a) {
      for (const double v : row) s += v * v;
    }
    return s;
  };
  const Dense x = center(to_dense(xm));
  const Dense y = center(to_dense(ym));
  const double xy = frob2(matmul(transpose(y), x));
  const double xx = std::sqrt(frob2(matmul(transpose(x), x)));
  const double yy = std::sqrt(frob2(matmul(transpose(y), y)));
  return xy / (xx * yy);
}

inline augimpact::Matrix2D random_matrix(std::size_t n, std::size_t d, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  augimpact::Matrix2D m(n, d);
  for (auto& v : m.values()) v = normal(gen);
  return m;
}

/// Orthogonal d x d matrix from Gram-Schmidt on Gaussian columns.
inline augimpact::Matrix2D random_orthogonal(std::size_t d, std::mt19937_64& gen) {
  augimpact::Matrix2D a = random_matrix(d, d, gen);
  for (std::size_t j = 0; j < d; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < j; ++p) {
        double dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += a(i, j) * a(i, p);
        for (std::size_t i = 0; i < d; ++i) a(i, j) -= dot * a(i, p);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) norm += a(i, j) * a(i, j);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < d; ++i) a(i, j) /= norm;
  }
  return a;
}

inline augimpact::Matrix2D multiply(const augimpact::Matrix2D& a, const augimpact::Matrix2D& b) {
  augimpact::Matrix2D c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t p = 0; p < a.cols(); ++p) {
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, p) * b(p, j);
    }
  }
  return c;
}

inline augimpact::Matrix2D scale(augimpact::Matrix2D m, double c) {
  for (auto& v : m.values()) v *= c;
  return m;
}

}  // namespace oracle
