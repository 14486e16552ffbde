#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature for complex-valued integrands
// on finite intervals, plus a left-tail driver for integrals over
// (-inf, b] with geometrically growing panels.

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <stdexcept>
#include <vector>

namespace fnls {

struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// G7/K15 nodes and weights on [-1,1]: {abscissa, gauss weight, kronrod weight}
inline constexpr double gk15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <class F>
std::complex<double> gk15_panel(const F& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    std::complex<double> y0 = f(mid);
    std::complex<double> g7 = gk15[0][1] * y0;
    std::complex<double> k15 = gk15[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = hw * gk15[i][0];
        const std::complex<double> yi = f(mid + dx) + f(mid - dx);
        g7 += gk15[i][1] * yi;
        k15 += gk15[i][2] * yi;
    }
    g7 *= hw;
    k15 *= hw;
    err = std::abs(k15 - g7);
    return k15;
}

} // namespace detail

// Integrate f over [a,b] to absolute tolerance abs_tol by adaptive bisection.
template <class F>
std::complex<double> integrate(const F& f, double a, double b, double abs_tol = 1e-10,
                               int max_panels = 4000) {
    if (a == b) return {0.0, 0.0};
    struct Panel {
        double a, b, err;
        std::complex<double> val;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    std::priority_queue<Panel> q;
    double err0;
    auto v0 = detail::gk15_panel(f, a, b, err0);
    q.push({a, b, err0, v0});
    double total_err = err0;
    std::complex<double> total = v0;
    int n = 1;
    while (total_err > abs_tol) {
        if (n >= max_panels)
            throw quadrature_error("integrate: panel budget exhausted before tolerance");
        Panel p = q.top();
        q.pop();
        const double m = 0.5 * (p.a + p.b);
        if (m <= p.a || m >= p.b)
            throw quadrature_error("integrate: interval too small to subdivide");
        double e1, e2;
        auto v1 = detail::gk15_panel(f, p.a, m, e1);
        auto v2 = detail::gk15_panel(f, m, p.b, e2);
        total += v1 + v2 - p.val;
        total_err += e1 + e2 - p.err;
        q.push({p.a, m, e1, v1});
        q.push({m, p.b, e2, v2});
        ++n;
    }
    return total;
}

// Integrate f over [a,b] splitting first at the given interior breakpoints.
template <class F>
std::complex<double> integrate_with_breaks(const F& f, double a, double b,
                                           const std::vector<double>& breaks,
                                           double abs_tol = 1e-10) {
    std::vector<double> pts{a};
    for (double s : breaks)
        if (s > a && s < b) pts.push_back(s);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    std::complex<double> total = 0.0;
    const double tol = abs_tol / double(pts.size() - 1);
    for (size_t i = 0; i + 1 < pts.size(); ++i) total += integrate(f, pts[i], pts[i + 1], tol);
    return total;
}

// Integrate f over (-inf, b]. Panels [b - 2^{j+1} w, b - 2^j w] are added
// until one contributes less than abs_tol/4 in magnitude.
template <class F>
std::complex<double> integrate_left_tail(const F& f, double b, double abs_tol = 1e-10,
                                         double first_width = 1.0, int max_doublings = 64) {
    std::complex<double> total = integrate(f, b - first_width, b, 0.25 * abs_tol);
    double w = first_width;
    for (int j = 0; j < max_doublings; ++j) {
        auto piece = integrate(f, b - 2.0 * w, b - w, 0.25 * abs_tol);
        total += piece;
        w *= 2.0;
        if (std::abs(piece) < 0.25 * abs_tol) return total;
    }
    throw quadrature_error("integrate_left_tail: tail did not converge");
}

} // namespace fnls
