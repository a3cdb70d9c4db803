// Copyright 2026 The MPPO Mahjong Authors.
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

#ifndef MPPO_SIMD_KERNELS_HPP_
#define MPPO_SIMD_KERNELS_HPP_

#include <cstddef>
#include <string_view>

namespace mppo::simd {

// Dense double-precision kernels behind the MLP. Matrices are row-major
// (rows x cols). Each level provides the same contract; results may differ
// between levels only by floating-point summation order.
struct Kernels {
  std::string_view name;
  // y = W x + b
  void (*gemv)(const double* w, const double* x, const double* b, double* y, std::size_t rows, std::size_t cols);
  // y = W^T g   (y has `cols` entries, overwritten)
  void (*gemv_t)(const double* w, const double* g, double* y, std::size_t rows, std::size_t cols);
  // W += alpha * g x^T
  void (*ger)(double* w, double alpha, const double* g, const double* x, std::size_t rows, std::size_t cols);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
};

enum class Level { Scalar, Avx2 };

const Kernels& scalar_kernels();
// nullptr when the variant was not compiled in.
const Kernels* avx2_kernels();

bool cpu_supports(Level level);

// Best level supported by the CPU, unless MPPO_SIMD=scalar is set in the
// environment. Resolved once per process.
const Kernels& active();

// Overrides the process-wide selection (tests, benchmarks). Throws
// std::runtime_error when the level is unavailable.
void select(Level level);

}  // namespace mppo::simd

#endif  // MPPO_SIMD_KERNELS_HPP_
