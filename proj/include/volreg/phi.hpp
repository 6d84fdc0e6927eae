#pragma once

#include <cmath>

namespace volreg {

// Scalar exponential-integrator weights phi1(x) = (e^x - 1)/x and
// phi2(x) = (e^x - 1 - x)/x^2, with series evaluation near 0 where the
// closed forms cancel catastrophically.

inline double phi1(double x) {
    if (std::abs(x) > 0.5) return std::expm1(x) / x;
    double term = 1.0, sum = 1.0;
    for (int k = 2; k <= 18; ++k) {
        term *= x / k;
        sum += term;
    }
    return sum;  // sum_{k>=0} x^k/(k+1)!
}

inline double phi2(double x) {
    if (std::abs(x) > 0.5) return (std::expm1(x) - x) / (x * x);
    double term = 0.5, sum = 0.5;
    for (int k = 3; k <= 19; ++k) {
        term *= x / k;
        sum += term;
    }
    return sum;  // sum_{k>=0} x^k/(k+2)!
}

inline double phi3(double x) {
    if (std::abs(x) > 0.5) return (std::expm1(x) - x - 0.5 * x * x) / (x * x * x);
    double term = 1.0 / 6.0, sum = term;
    for (int k = 4; k <= 20; ++k) {
        term *= x / k;
        sum += term;
    }
    return sum;  // sum_{k>=0} x^k/(k+3)!
}

}  // namespace volreg
