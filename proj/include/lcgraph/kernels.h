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

#ifndef LCGRAPH_KERNELS_H_
#define LCGRAPH_KERNELS_H_

#include <cstddef>

// Dense double-precision kernels behind the autodiff core. Every kernel has
// a scalar reference implementation; SIMD variants are compiled separately
// and chosen once at runtime from the CPU's capabilities. Matrices are
// row-major and densely packed.
namespace lcgraph::kernels {

struct KernelTable {
  const char* name;

  // C[m x n] (+)= A[m x k] * B[k x n]
  void (*gemm_nn)(int m, int n, int k, const double* a, const double* b,
                  double* c, bool accumulate);
  // C[m x n] (+)= A[m x k] * B^T, B is [n x k]
  void (*gemm_nt)(int m, int n, int k, const double* a, const double* b,
                  double* c, bool accumulate);
  // C[m x n] (+)= A^T * B[k x n], A is [k x m]
  void (*gemm_tn)(int m, int n, int k, const double* a, const double* b,
                  double* c, bool accumulate);
  // y += alpha * x
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
  double (*dot)(std::size_t n, const double* x, const double* y);
  // out = x * y elementwise
  void (*mul)(std::size_t n, const double* x, const double* y, double* out);
  // out = tanh(x) elementwise; SIMD variants stay within a few ulp of
  // std::tanh.
  void (*tanh)(std::size_t n, const double* x, double* out);
};

const KernelTable& ScalarKernels();

// nullptr when the build has no AVX2 variant.
const KernelTable* Avx2Kernels();

bool CpuSupportsAvx2();

// The table every caller should use. Picks AVX2+FMA when both the build and
// the CPU support it, unless LCGRAPH_KERNELS=scalar is set in the
// environment. The choice is made once per process.
const KernelTable& ActiveKernels();

}  // namespace lcgraph::kernels

#endif  // LCGRAPH_KERNELS_H_
