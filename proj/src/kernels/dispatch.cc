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

#include <cstdlib>
#include <string_view>

#include "lcgraph/kernels.h"

namespace lcgraph::kernels {

#if !defined(LCGRAPH_HAVE_AVX2)
const KernelTable* Avx2Kernels() { return nullptr; }
#endif

bool CpuSupportsAvx2() {
#if defined(LCGRAPH_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& ActiveKernels() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* env = std::getenv("LCGRAPH_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") {
      return ScalarKernels();
    }
    if (Avx2Kernels() != nullptr && CpuSupportsAvx2()) return *Avx2Kernels();
    return ScalarKernels();
  }();
  return table;
}

}  // namespace lcgraph::kernels
