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

#include "soledge/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>

namespace soledge::kernels {

namespace scalar {

void scale(const double* x, std::size_t n, double a, double* y) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = a * x[i];
    }
}

void mul(const double* x, const double* w, std::size_t n, double* y) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = x[i] * w[i];
    }
}

void clamp(const double* x, std::size_t n, double lo, double hi, double* y) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i];
        v = v < lo ? lo : v;
        v = v > hi ? hi : v;
        y[i] = v;
    }
}

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i];
    }
    return acc;
}

double min(const double* x, std::size_t n) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        m = x[i] < m ? x[i] : m;
    }
    return m;
}

void half_sine(double t0, double dt, std::size_t n, double sunrise_h, double sunset_h,
               double* out) {
    // phase slope precomputed so scalar and SIMD variants round identically
    const double k = std::numbers::pi / (sunset_h - sunrise_h);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        const double tau = t - 24.0 * std::floor(t / 24.0);
        if (tau >= sunrise_h && tau <= sunset_h) {
            const double s = std::sin((tau - sunrise_h) * k);
            out[i] = s > 0.0 ? s : 0.0;
        } else {
            out[i] = 0.0;
        }
    }
}

}  // namespace scalar

namespace {

bool select_avx2() {
#if defined(SOLEDGE_HAVE_AVX2)
    if (const char* force = std::getenv("SOLEDGE_FORCE_SCALAR"); force && force[0] == '1') {
        return false;
    }
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const bool kUseAvx2 = select_avx2();

}  // namespace

#if defined(SOLEDGE_HAVE_AVX2)
ScaleFn scale = kUseAvx2 ? avx2::scale : scalar::scale;
MulFn mul = kUseAvx2 ? avx2::mul : scalar::mul;
ClampFn clamp = kUseAvx2 ? avx2::clamp : scalar::clamp;
SumFn sum = kUseAvx2 ? avx2::sum : scalar::sum;
MinFn min = kUseAvx2 ? avx2::min : scalar::min;
HalfSineFn half_sine = kUseAvx2 ? avx2::half_sine : scalar::half_sine;
#else
ScaleFn scale = scalar::scale;
MulFn mul = scalar::mul;
ClampFn clamp = scalar::clamp;
SumFn sum = scalar::sum;
MinFn min = scalar::min;
HalfSineFn half_sine = scalar::half_sine;
#endif

const char* backend() {
    return kUseAvx2 ? "avx2" : "scalar";
}

}  // namespace soledge::kernels
