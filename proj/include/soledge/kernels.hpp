// Copyright 2026-present the soledge project
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

#ifndef SOLEDGE_KERNELS_HPP
#define SOLEDGE_KERNELS_HPP

#include <cstddef>

// Series kernels behind the simulator's data-parallel loops: irradiance
// series generation and trace-column reductions. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant; the active
// backend is resolved once at startup from CPUID (SOLEDGE_FORCE_SCALAR=1
// in the environment pins the scalar path).
//
// Inputs are expected to be finite; NaN propagation is unspecified.

namespace soledge::kernels {

// y[i] = a * x[i]
using ScaleFn = void (*)(const double* x, std::size_t n, double a, double* y);
// y[i] = x[i] * w[i]
using MulFn = void (*)(const double* x, const double* w, std::size_t n, double* y);
// y[i] = min(max(x[i], lo), hi)
using ClampFn = void (*)(const double* x, std::size_t n, double lo, double hi, double* y);
// sum of x[0..n); 0 for n == 0
using SumFn = double (*)(const double* x, std::size_t n);
// minimum of x[0..n); +inf for n == 0
using MinFn = double (*)(const double* x, std::size_t n);
// out[i] = clear-sky daylight fraction at t0 + i*dt hours: a half sine
// between sunrise and sunset on a 24 h wrap, 0 at night. Requires
// sunset > sunrise, both in [0, 24].
using HalfSineFn = void (*)(double t0, double dt, std::size_t n, double sunrise_h,
                            double sunset_h, double* out);

extern ScaleFn scale;
extern MulFn mul;
extern ClampFn clamp;
extern SumFn sum;
extern MinFn min;
extern HalfSineFn half_sine;

// Name of the dispatched backend: "avx2" or "scalar".
const char* backend();

namespace scalar {
void scale(const double* x, std::size_t n, double a, double* y);
void mul(const double* x, const double* w, std::size_t n, double* y);
void clamp(const double* x, std::size_t n, double lo, double hi, double* y);
double sum(const double* x, std::size_t n);
double min(const double* x, std::size_t n);
void half_sine(double t0, double dt, std::size_t n, double sunrise_h, double sunset_h,
               double* out);
}  // namespace scalar

#if defined(SOLEDGE_HAVE_AVX2)
namespace avx2 {
void scale(const double* x, std::size_t n, double a, double* y);
void mul(const double* x, const double* w, std::size_t n, double* y);
void clamp(const double* x, std::size_t n, double lo, double hi, double* y);
double sum(const double* x, std::size_t n);
double min(const double* x, std::size_t n);
void half_sine(double t0, double dt, std::size_t n, double sunrise_h, double sunset_h,
               double* out);
}  // namespace avx2
#endif

}  // namespace soledge::kernels

#endif  // SOLEDGE_KERNELS_HPP
