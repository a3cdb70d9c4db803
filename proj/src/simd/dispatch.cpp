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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "mppo/simd/kernels.hpp"

namespace mppo::simd {

#ifndef MPPO_HAVE_AVX2
const Kernels* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports(Level level) {
  switch (level) {
    case Level::Scalar:
      return true;
    case Level::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace {

const Kernels* resolve() {
  const char* env = std::getenv("MPPO_SIMD");
  if (env && std::string_view(env) == "scalar") return &scalar_kernels();
  if (cpu_supports(Level::Avx2)) return avx2_kernels();
  return &scalar_kernels();
}

std::atomic<const Kernels*>& slot() {
  static std::atomic<const Kernels*> s{resolve()};
  return s;
}

}  // namespace

const Kernels& active() { return *slot().load(std::memory_order_acquire); }

void select(Level level) {
  if (!cpu_supports(level)) throw std::runtime_error("requested SIMD level is not available");
  slot().store(level == Level::Scalar ? &scalar_kernels() : avx2_kernels(), std::memory_order_release);
}

}  // namespace mppo::simd
