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

#include <immintrin.h>

#include <cmath>
#include <limits>
#include <numbers>

namespace soledge::kernels::avx2 {

void scale(const double* x, std::size_t n, double a, double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) {
        y[i] = a * x[i];
    }
}

void mul(const double* x, const double* w, std::size_t n, double* y) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(w + i)));
    }
    for (; i < n; ++i) {
        y[i] = x[i] * w[i];
    }
}

void clamp(const double* x, std::size_t n, double lo, double hi, double* y) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        v = _mm256_max_pd(v, vlo);
        v = _mm256_min_pd(v, vhi);
        _mm256_storeu_pd(y + i, v);
    }
    for (; i < n; ++i) {
        double v = x[i];
        v = v < lo ? lo : v;
        v = v > hi ? hi : v;
        y[i] = v;
    }
}

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]));
    for (; i < n; ++i) {
        total += x[i];
    }
    return total;
}

double min(const double* x, std::size_t n) {
    __m256d acc = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = lanes[0];
    m = lanes[1] < m ? lanes[1] : m;
    m = lanes[2] < m ? lanes[2] : m;
    m = lanes[3] < m ? lanes[3] : m;
    for (; i < n; ++i) {
        m = x[i] < m ? x[i] : m;
    }
    return m;
}

namespace {

// cos(v) for |v| <= pi/2, Maclaurin through v^22; truncation is below
// double rounding noise on that range.
inline __m256d cos_poly(__m256d v) {
    const __m256d v2 = _mm256_mul_pd(v, v);
    __m256d p = _mm256_set1_pd(-8.8967913924505733e-22);
    p = _mm256_fmadd_pd(p, v2, _mm256_set1_pd(4.1103176233121648e-19));
    p = _mm256_fmadd_pd(p, v2, _mm256_set1_pd(-1.5619206968586226e-16));
    p = _mm256_fmadd_pd(p, v2, _mm256_set1_pd(4.7794773323873853e-14));
    p = _mm256_fmadd_pd(p, v2, _mm256_set1_pd(-1.1470745597729725e-11));
    p = _mm256_fmadd_pd(p, v2, _mm256_set1_pd(2.0876756987868099e-09));
    p = _mm256_fmadd_pd(p, v2, _mm256_set1_pd(-2.7557319223985893e-07));
    p = _mm256_fmadd_pd(p, v2, _mm256_set1_pd(2.4801587301587302e-05));
    p = _mm256_fmadd_pd(p, v2, _mm256_set1_pd(-1.3888888888888889e-03));
    p = _mm256_fmadd_pd(p, v2, _mm256_set1_pd(4.1666666666666664e-02));
    p = _mm256_fmadd_pd(p, v2, _mm256_set1_pd(-0.5));
    p = _mm256_fmadd_pd(p, v2, _mm256_set1_pd(1.0));
    return p;
}

}  // namespace

void half_sine(double t0, double dt, std::size_t n, double sunrise_h, double sunset_h,
               double* out) {
    const double k = std::numbers::pi / (sunset_h - sunrise_h);
    const __m256d vt0 = _mm256_set1_pd(t0);
    const __m256d vdt = _mm256_set1_pd(dt);
    const __m256d v24 = _mm256_set1_pd(24.0);
    const __m256d vrise = _mm256_set1_pd(sunrise_h);
    const __m256d vset = _mm256_set1_pd(sunset_h);
    const __m256d vk = _mm256_set1_pd(k);
    const __m256d vhalfpi = _mm256_set1_pd(std::numbers::pi / 2.0);
    const __m256d vzero = _mm256_setzero_pd();

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d idx = _mm256_set_pd(static_cast<double>(i + 3), static_cast<double>(i + 2),
                                          static_cast<double>(i + 1), static_cast<double>(i));
        // t = t0 + i*dt, same mul/add split as the scalar reference
        const __m256d t = _mm256_add_pd(vt0, _mm256_mul_pd(idx, vdt));
        const __m256d tau =
            _mm256_sub_pd(t, _mm256_mul_pd(v24, _mm256_floor_pd(_mm256_div_pd(t, v24))));
        const __m256d day = _mm256_and_pd(_mm256_cmp_pd(tau, vrise, _CMP_GE_OQ),
                                          _mm256_cmp_pd(tau, vset, _CMP_LE_OQ));
        // sin(phase) = cos(phase - pi/2), phase in [0, pi] during daylight
        const __m256d phase = _mm256_mul_pd(_mm256_sub_pd(tau, vrise), vk);
        const __m256d s = _mm256_max_pd(cos_poly(_mm256_sub_pd(phase, vhalfpi)), vzero);
        _mm256_storeu_pd(out + i, _mm256_and_pd(s, day));
    }
    for (; i < n; ++i) {
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

}  // namespace soledge::kernels::avx2
