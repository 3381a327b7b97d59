#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ncc::normal {

template <class T>
inline T pdf(T x) {
    return std::exp(T(-0.5) * x * x) / std::sqrt(T(2) * std::numbers::pi_v<T>);
}

template <class T>
inline T cdf(T x) {
    return T(0.5) * std::erfc(-x / std::numbers::sqrt2_v<T>);
}

// Upper tail 1 - cdf(x) without cancellation.
template <class T>
inline T sf(T x) {
    return T(0.5) * std::erfc(x / std::numbers::sqrt2_v<T>);
}

// Density of N(mean, variance) at x.
template <class T>
inline T pdf(T x, T mean, T variance) {
    const T sd = std::sqrt(variance);
    return pdf((x - mean) / sd) / sd;
}

template <class T>
inline T cdf(T x, T mean, T variance) {
    return cdf((x - mean) / std::sqrt(variance));
}

/// Inverse Mills ratio pdf(z) / sf(z), stable for large positive z where
/// sf underflows. Uses a continued fraction beyond z = 8.
template <class T>
inline T upper_mills_ratio(T z) {
    if (z < T(8)) return pdf(z) / sf(z);
    // sf(z)/pdf(z) = 1/(z + 1/(z + 2/(z + 3/(z + ...))))
    T tail = z;
    for (int k = 80; k >= 1; --k) tail = z + T(k) / tail;
    return tail;
}

/// Standard normal quantile. Acklam's rational approximation refined with
/// one Halley step against erfc; absolute error is at the double rounding
/// level over (0, 1).
template <class T>
T quantile(T p) {
    if (!(p > T(0) && p < T(1)))
        throw std::domain_error("normal quantile requires 0 < p < 1");

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr T p_low = T(0.02425);

    T x;
    if (p < p_low) {
        const T q = std::sqrt(T(-2) * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= 1 - p_low) {
        const T q = p - T(0.5);
        const T r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        const T q = std::sqrt(T(-2) * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }

    // Halley refinement; work in the tail closest to p to keep precision.
    for (int it = 0; it < 2; ++it) {
        const T e = p < T(0.5) ? cdf(x) - p : (1 - p) - sf(x);
        const T u = e * std::sqrt(T(2) * std::numbers::pi_v<T>) * std::exp(x * x / 2);
        x = x - u / (1 + x * u / 2);
    }
    return x;
}

}  // namespace ncc::normal
