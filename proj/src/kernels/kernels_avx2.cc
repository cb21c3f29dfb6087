// Copyright 2026 The lcgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Built with -mavx2 -mfma. Nothing in this file may run before
// CpuSupportsAvx2() has been checked.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lcgraph/kernels.h"

namespace lcgraph::kernels {

namespace {

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double Dot(std::size_t n, const double* x, const double* y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void Axpy(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void Mul(std::size_t n, const double* x, const double* y, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

// Scalar tail shared by the edge cases of the blocked kernel.
inline void GemmTail(int i0, int i1, int j0, int j1, int n, int k,
                     const double* a, const double* b, double* c,
                     bool accumulate) {
  for (int i = i0; i < i1; ++i) {
    const double* ai = a + static_cast<std::size_t>(i) * k;
    double* ci = c + static_cast<std::size_t>(i) * n;
    for (int j = j0; j < j1; ++j) {
      double s = accumulate ? ci[j] : 0.0;
      for (int p = 0; p < k; ++p) s += ai[p] * b[static_cast<std::size_t>(p) * n + j];
      ci[j] = s;
    }
  }
}

// 4x8 register tile: eight accumulators, two B loads and four broadcasts
// per k step.
void GemmNN(int m, int n, int k, const double* a, const double* b, double* c,
            bool accumulate) {
  const int m4 = m - m % 4;
  const int n8 = n - n % 8;
  const int n4 = n - n % 4;
  for (int i = 0; i < m4; i += 4) {
    const double* a0 = a + static_cast<std::size_t>(i) * k;
    const double* a1 = a0 + k;
    const double* a2 = a1 + k;
    const double* a3 = a2 + k;
    double* c0 = c + static_cast<std::size_t>(i) * n;
    double* c1 = c0 + n;
    double* c2 = c1 + n;
    double* c3 = c2 + n;
    for (int j = 0; j < n8; j += 8) {
      __m256d r00, r01, r10, r11, r20, r21, r30, r31;
      if (accumulate) {
        r00 = _mm256_loadu_pd(c0 + j); r01 = _mm256_loadu_pd(c0 + j + 4);
        r10 = _mm256_loadu_pd(c1 + j); r11 = _mm256_loadu_pd(c1 + j + 4);
        r20 = _mm256_loadu_pd(c2 + j); r21 = _mm256_loadu_pd(c2 + j + 4);
        r30 = _mm256_loadu_pd(c3 + j); r31 = _mm256_loadu_pd(c3 + j + 4);
      } else {
        r00 = r01 = r10 = r11 = r20 = r21 = r30 = r31 = _mm256_setzero_pd();
      }
      const double* bp = b + j;
      for (int p = 0; p < k; ++p, bp += n) {
        const __m256d b0 = _mm256_loadu_pd(bp);
        const __m256d b1 = _mm256_loadu_pd(bp + 4);
        __m256d av = _mm256_broadcast_sd(a0 + p);
        r00 = _mm256_fmadd_pd(av, b0, r00);
        r01 = _mm256_fmadd_pd(av, b1, r01);
        av = _mm256_broadcast_sd(a1 + p);
        r10 = _mm256_fmadd_pd(av, b0, r10);
        r11 = _mm256_fmadd_pd(av, b1, r11);
        av = _mm256_broadcast_sd(a2 + p);
        r20 = _mm256_fmadd_pd(av, b0, r20);
        r21 = _mm256_fmadd_pd(av, b1, r21);
        av = _mm256_broadcast_sd(a3 + p);
        r30 = _mm256_fmadd_pd(av, b0, r30);
        r31 = _mm256_fmadd_pd(av, b1, r31);
      }
      _mm256_storeu_pd(c0 + j, r00); _mm256_storeu_pd(c0 + j + 4, r01);
      _mm256_storeu_pd(c1 + j, r10); _mm256_storeu_pd(c1 + j + 4, r11);
      _mm256_storeu_pd(c2 + j, r20); _mm256_storeu_pd(c2 + j + 4, r21);
      _mm256_storeu_pd(c3 + j, r30); _mm256_storeu_pd(c3 + j + 4, r31);
    }
    for (int j = n8; j < n4; j += 4) {
      __m256d r0 = accumulate ? _mm256_loadu_pd(c0 + j) : _mm256_setzero_pd();
      __m256d r1 = accumulate ? _mm256_loadu_pd(c1 + j) : _mm256_setzero_pd();
      __m256d r2 = accumulate ? _mm256_loadu_pd(c2 + j) : _mm256_setzero_pd();
      __m256d r3 = accumulate ? _mm256_loadu_pd(c3 + j) : _mm256_setzero_pd();
      const double* bp = b + j;
      for (int p = 0; p < k; ++p, bp += n) {
        const __m256d b0 = _mm256_loadu_pd(bp);
        r0 = _mm256_fmadd_pd(_mm256_broadcast_sd(a0 + p), b0, r0);
        r1 = _mm256_fmadd_pd(_mm256_broadcast_sd(a1 + p), b0, r1);
        r2 = _mm256_fmadd_pd(_mm256_broadcast_sd(a2 + p), b0, r2);
        r3 = _mm256_fmadd_pd(_mm256_broadcast_sd(a3 + p), b0, r3);
      }
      _mm256_storeu_pd(c0 + j, r0);
      _mm256_storeu_pd(c1 + j, r1);
      _mm256_storeu_pd(c2 + j, r2);
      _mm256_storeu_pd(c3 + j, r3);
    }
    GemmTail(i, i + 4, n4, n, n, k, a, b, c, accumulate);
  }
  for (int i = m4; i < m; ++i) {
    const double* ai = a + static_cast<std::size_t>(i) * k;
    double* ci = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n4; j += 4) {
      __m256d r0 = accumulate ? _mm256_loadu_pd(ci + j) : _mm256_setzero_pd();
      const double* bp = b + j;
      for (int p = 0; p < k; ++p, bp += n) {
        r0 = _mm256_fmadd_pd(_mm256_broadcast_sd(ai + p), _mm256_loadu_pd(bp), r0);
      }
      _mm256_storeu_pd(ci + j, r0);
    }
    GemmTail(i, i + 1, n4, n, n, k, a, b, c, accumulate);
  }
}

// Transposes rows x cols `src` into `dst` (cols x rows).
void Transpose(int rows, int cols, const double* src, double* dst) {
  for (int r = 0; r < rows; ++r) {
    const double* s = src + static_cast<std::size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) dst[static_cast<std::size_t>(c) * rows + r] = s[c];
  }
}

std::vector<double>& PackBuffer(std::size_t size) {
  thread_local std::vector<double> buffer;
  if (buffer.size() < size) buffer.resize(size);
  return buffer;
}

void GemmNT(int m, int n, int k, const double* a, const double* b, double* c,
            bool accumulate) {
  std::vector<double>& bt = PackBuffer(static_cast<std::size_t>(n) * k);
  Transpose(n, k, b, bt.data());
  GemmNN(m, n, k, a, bt.data(), c, accumulate);
}

void GemmTN(int m, int n, int k, const double* a, const double* b, double* c,
            bool accumulate) {
  std::vector<double>& at = PackBuffer(static_cast<std::size_t>(m) * k);
  Transpose(k, m, a, at.data());
  GemmNN(m, n, k, at.data(), b, c, accumulate);
}

// expm1(y) for y <= 0: y = k*ln2 + r with |r| <= ln2/2, then
// expm1(y) = 2^k * expm1(r) + (2^k - 1), with expm1(r) from its Taylor
// series to degree 13 (truncation below 1e-17 relative).
inline __m256d Expm1NonPositive(__m256d y) {
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d inv_ln2 = _mm256_set1_pd(1.44269504088896338700e+00);
  y = _mm256_max_pd(_mm256_set1_pd(-60.0), y);
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(y, inv_ln2),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d r = _mm256_fnmadd_pd(k, ln2_lo, _mm256_fnmadd_pd(k, ln2_hi, y));

  // p = 1/2! + r/3! + ... + r^11/13!
  static constexpr double kCoef[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0,
      1.0 / 3628800.0,    1.0 / 362880.0,    1.0 / 40320.0,
      1.0 / 5040.0,       1.0 / 720.0,       1.0 / 120.0,
      1.0 / 24.0,         1.0 / 6.0,         1.0 / 2.0};
  __m256d p = _mm256_set1_pd(kCoef[0]);
  for (int i = 1; i < 12; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kCoef[i]));
  const __m256d em = _mm256_fmadd_pd(_mm256_mul_pd(r, r), p, r);

  // 2^k through the exponent bits; k is integral in [-87, 0].
  const __m256d magic = _mm256_set1_pd(0x1.8p52);
  const __m256i ki = _mm256_castpd_si256(_mm256_add_pd(k, magic));
  const __m256i bits = _mm256_slli_epi64(
      _mm256_add_epi64(_mm256_sub_epi64(ki, _mm256_castpd_si256(magic)),
                       _mm256_set1_epi64x(1023)),
      52);
  const __m256d two_k = _mm256_castsi256_pd(bits);
  return _mm256_fmadd_pd(two_k, em, _mm256_sub_pd(two_k, _mm256_set1_pd(1.0)));
}

// tanh(x) = -sign(x) * u / (2 + u) with u = expm1(-2|x|).
void Tanh(std::size_t n, const double* x, double* out) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d sign = _mm256_and_pd(v, sign_mask);
    const __m256d a = _mm256_andnot_pd(sign_mask, v);
    const __m256d u = Expm1NonPositive(_mm256_mul_pd(_mm256_set1_pd(-2.0), a));
    const __m256d t = _mm256_div_pd(u, _mm256_add_pd(_mm256_set1_pd(2.0), u));
    // t <= 0; flip it for positive inputs.
    __m256d res = _mm256_xor_pd(t, _mm256_xor_pd(sign, sign_mask));
    // NaN inputs pass through.
    const __m256d nan = _mm256_cmp_pd(v, v, _CMP_UNORD_Q);
    res = _mm256_blendv_pd(res, v, nan);
    _mm256_storeu_pd(out + i, res);
  }
  for (; i < n; ++i) out[i] = std::tanh(x[i]);
}

}  // namespace

const KernelTable* Avx2Kernels() {
  static const KernelTable table = {"avx2", GemmNN, GemmNT, GemmTN,
                                    Axpy,   Dot,    Mul,    Tanh};
  return &table;
}

}  // namespace lcgraph::kernels
