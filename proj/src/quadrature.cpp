#include "volreg/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "volreg/errors.hpp"

namespace volreg {

namespace {

struct AdaptState {
    const std::function<double(double)>* f;
    double tol_scale;  // tolerance per unit length
    double abs_floor;
    double value = 0.0;
    double err = 0.0;
    bool converged = true;
};

// Classic recursive Simpson with Richardson error control. `whole` is the
// Simpson estimate on [a,b], fa/fm/fb the endpoint and midpoint values.
void adapt(AdaptState& st, double a, double b, double fa, double fm, double fb,
           double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double h = b - a;
    const double fl = (*st.f)(0.5 * (a + m));
    const double fr = (*st.f)(0.5 * (m + b));
    const double left = h / 12.0 * (fa + 4.0 * fl + fm);
    const double right = h / 12.0 * (fm + 4.0 * fr + fb);
    const double delta = left + right - whole;
    const double local_tol = std::max(st.tol_scale * h, st.abs_floor);
    if (depth <= 0 || std::abs(delta) <= 15.0 * local_tol) {
        st.value += left + right + delta / 15.0;
        st.err += std::abs(delta) / 15.0;
        if (depth <= 0 && std::abs(delta) > 15.0 * local_tol) st.converged = false;
        return;
    }
    adapt(st, a, m, fa, fl, fm, left, depth - 1);
    adapt(st, m, b, fm, fr, fb, right, depth - 1);
}

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return {0.0, 0.0, true};
    // Bootstrap the recursion on a base grid so integrands whose mass sits in
    // a small corner of [a, b] cannot fool the top-level error estimate.
    const int panels = 32;
    std::vector<double> nodes(2 * panels + 1);
    for (int i = 0; i <= 2 * panels; ++i) {
        nodes[static_cast<std::size_t>(i)] = a + (b - a) * i / (2.0 * panels);
    }
    std::vector<double> values(nodes.size());
    double probe = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        values[i] = f(nodes[i]);
        probe += std::abs(values[i]);
    }
    double scale = std::abs(b - a) * probe / static_cast<double>(nodes.size());
    if (scale == 0.0) scale = 1.0;

    AdaptState st;
    st.f = &f;
    st.tol_scale = rel_tol * scale / std::abs(b - a);
    st.abs_floor = abs_tol;
    for (int i = 0; i < panels; ++i) {
        const double pa = nodes[static_cast<std::size_t>(2 * i)];
        const double pb = nodes[static_cast<std::size_t>(2 * i + 2)];
        const double fa = values[static_cast<std::size_t>(2 * i)];
        const double fm = values[static_cast<std::size_t>(2 * i + 1)];
        const double fb = values[static_cast<std::size_t>(2 * i + 2)];
        const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        adapt(st, pa, pb, fa, fm, fb, whole, max_depth);
    }
    return {st.value, st.err, st.converged};
}

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, const char* what) {
    QuadResult r = adaptive_simpson(f, a, b, rel_tol);
    const double achieved =
        r.value != 0.0 ? r.error_estimate / std::abs(r.value) : r.error_estimate;
    if (!r.converged) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "%s: quadrature did not reach rel tol %.3g (achieved %.3g)", what,
                      rel_tol, achieved);
        throw NumericalError(buf);
    }
    return r.value;
}

double composite_simpson(std::span<const double> samples, double dt) {
    const std::size_t n = samples.size();
    if (n < 3) throw ValidationError("composite_simpson: need at least 3 samples");
    if (!(dt > 0.0)) throw ValidationError("composite_simpson: dt must be positive");
    const std::size_t intervals = n - 1;
    double total = 0.0;
    std::size_t i = 0;
    // Pairwise Simpson panels; if the interval count is odd, close with a
    // 3/8 rule over the last three intervals (needs intervals >= 3).
    std::size_t simpson_end = intervals % 2 == 0 ? intervals : (intervals >= 3 ? intervals - 3 : 0);
    for (; i + 2 <= simpson_end; i += 2) {
        total += dt / 3.0 * (samples[i] + 4.0 * samples[i + 1] + samples[i + 2]);
    }
    if (intervals % 2 != 0) {
        if (intervals >= 3) {
            const std::size_t j = intervals - 3;
            total += 3.0 * dt / 8.0 *
                     (samples[j] + 3.0 * samples[j + 1] + 3.0 * samples[j + 2] + samples[j + 3]);
        } else {
            total += 0.5 * dt * (samples[0] + samples[1]);  // single interval: trapezoid
        }
    }
    return total;
}

void cumulative_simpson(const std::vector<std::vector<double>>& rows, double dt,
                        std::vector<std::vector<double>>& out) {
    const std::size_t m = rows.size();
    if (m < 3) throw ValidationError("cumulative_simpson: need at least 3 samples");
    const std::size_t n = rows[0].size();
    out.assign(m, std::vector<double>(n, 0.0));
    // March over interval pairs; within each pair the integrand is replaced by
    // the parabola through its three samples, integrated to the half and the
    // full panel. A trailing odd interval reuses the last parabola.
    for (std::size_t j = 0; j + 2 < m; j += 2) {
        for (std::size_t k = 0; k < n; ++k) {
            const double v0 = rows[j][k], v1 = rows[j + 1][k], v2 = rows[j + 2][k];
            out[j + 1][k] = out[j][k] + dt / 12.0 * (5.0 * v0 + 8.0 * v1 - v2);
            out[j + 2][k] = out[j][k] + dt / 3.0 * (v0 + 4.0 * v1 + v2);
        }
    }
    if ((m - 1) % 2 != 0) {
        const std::size_t j = m - 2;  // last interval [t_{m-2}, t_{m-1}]
        for (std::size_t k = 0; k < n; ++k) {
            const double v0 = rows[j - 1][k], v1 = rows[j][k], v2 = rows[j + 1][k];
            out[j + 1][k] = out[j][k] + dt / 12.0 * (-v0 + 8.0 * v1 + 5.0 * v2);
        }
    }
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ValidationError("loglog_slope: need matching arrays of size >= 2");
    }
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace volreg
