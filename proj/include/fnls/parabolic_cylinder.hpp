#pragma once

// Parabolic cylinder function D_a(z) for complex order and argument,
// solving D'' + (a + 1/2 - z^2/4) D = 0. Three regimes:
//   |z| <= 8:           even/odd Maclaurin series (long double accumulation;
//                       the series loses ~e^{|z|^2/4} digits to cancellation)
//   |z| > 8, |arg z| <= pi/2:  Poincare expansion with optimal truncation
//   |z| > 8, |arg z| > pi/2:   connection formula onto the previous case
// Supported region: |z| <= 30, |order| <= 6.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "log_gamma.hpp"

namespace fnls {

struct pcf_domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

namespace detail {

using lcplx = std::complex<long double>;

inline lcplx to_l(cplx v) { return {static_cast<long double>(v.real()), static_cast<long double>(v.imag())}; }
inline cplx to_d(lcplx v) { return {static_cast<double>(v.real()), static_cast<double>(v.imag())}; }

// Maclaurin series: y'' = (z^2/4 - a - 1/2) y with the two normalized
// solutions y1 (even) and y2 (odd); D_a = D_a(0) y1 + D_a'(0) y2.
inline cplx pcf_taylor(cplx order, cplx z) {
    const lcplx nu = to_l(order);
    const lcplx zl = to_l(z);
    const lcplx lam = nu + lcplx(0.5L); // a + 1/2
    // coefficient recurrence: c_{m+2} (m+2)(m+1) = -lam c_m + c_{m-4}/4... no:
    // y = sum c_m z^m,  c_{m+2} = ( -lam c_m + c_{m-2}/4 ) / ((m+2)(m+1))
    lcplx c_even[3] = {1.0L, 0.0L, 0.0L}; // c_{m}, c_{m-2}, c_{m-4} rolling
    lcplx c_odd[3] = {1.0L, 0.0L, 0.0L};
    lcplx y1 = 1.0L, y2 = zl;
    lcplx zpow_even = 1.0L; // z^m for even m
    lcplx zpow_odd = zl;
    const long double z2 = std::norm(zl);
    int quiet = 0;
    for (int m = 0; m < 520 && quiet < 4; m += 2) {
        // even chain: from c_m (stored c_even[0]) to c_{m+2}
        const lcplx ce_next =
            (-lam * c_even[0] + c_even[1] * 0.25L) / lcplx((m + 2.0L) * (m + 1.0L));
        c_even[1] = c_even[0];
        c_even[0] = ce_next;
        zpow_even *= zl * zl;
        const lcplx t1 = ce_next * zpow_even;
        y1 += t1;
        // odd chain: from c_{m+1} to c_{m+3}
        const lcplx co_next =
            (-lam * c_odd[0] + c_odd[1] * 0.25L) / lcplx((m + 3.0L) * (m + 2.0L));
        c_odd[1] = c_odd[0];
        c_odd[0] = co_next;
        zpow_odd *= zl * zl;
        const lcplx t2 = co_next * zpow_odd;
        y2 += t2;
        const long double scale = std::abs(y1) + std::abs(y2) + 1.0L;
        if (m > int(z2) / 2 && std::abs(t1) < 1e-24L * scale && std::abs(t2) < 1e-24L * scale)
            ++quiet;
        else
            quiet = 0;
    }
    // connection constants D(0), D'(0)
    const double ln2 = std::numbers::ln2;
    const double lsp = 0.57236494292470008707; // log sqrt(pi)
    const cplx half{0.5, 0.0};
    const cplx d0 = std::exp(order * (0.5 * ln2) + lsp) * reciprocal_gamma(half * (1.0 - order));
    const cplx d0p =
        -std::exp((order + 1.0) * (0.5 * ln2) + lsp) * reciprocal_gamma(-half * order);
    return d0 * to_d(y1) + d0p * to_d(y2);
}

// Poincare expansion e^{-z^2/4} z^a sum_n t_n, optimal truncation; reliable
// for |arg z| <= pi/2 and |z| >= ~6.
inline cplx pcf_poincare(cplx order, cplx z) {
    const cplx pre = std::exp(-0.25 * z * z + order * std::log(z));
    cplx term{1.0, 0.0};
    cplx sum = term;
    double best = std::abs(term);
    const cplx inv2z2 = 1.0 / (2.0 * z * z);
    for (int n = 0; n < 120; ++n) {
        const cplx factor = -(order - 2.0 * n) * (order - 2.0 * n - 1.0) * inv2z2 / (n + 1.0);
        term *= factor;
        const double mag = std::abs(term);
        if (mag > best) break; // divergent tail reached
        sum += term;
        best = mag;
        if (mag < 1e-19 * std::abs(sum)) break;
    }
    return pre * sum;
}

inline cplx pcf_eval(cplx order, cplx z);

// connection formulas for |arg z| > pi/2 (exact identities):
//   D_a(z) = e^{+i pi a} D_a(-z) + sqrt(2 pi)/Gamma(-a) e^{+i pi (a+1)/2} D_{-a-1}(-i z)
//   D_a(z) = e^{-i pi a} D_a(-z) + sqrt(2 pi)/Gamma(-a) e^{-i pi (a+1)/2} D_{-a-1}(+i z)
// chosen so both right-hand arguments land in |arg| <= pi/2.
inline cplx pcf_connected(cplx order, cplx z) {
    const double pi = std::numbers::pi;
    const cplx i{0.0, 1.0};
    const cplx rg = reciprocal_gamma(-order);
    const double sq2pi = std::sqrt(2.0 * pi);
    if (std::arg(z) > 0.0) {
        return std::exp(i * pi * order) * pcf_eval(order, -z) +
               sq2pi * rg * std::exp(i * pi * (order + 1.0) * 0.5) *
                   pcf_eval(-order - 1.0, -i * z);
    }
    return std::exp(-i * pi * order) * pcf_eval(order, -z) +
           sq2pi * rg * std::exp(-i * pi * (order + 1.0) * 0.5) * pcf_eval(-order - 1.0, i * z);
}

inline cplx pcf_eval(cplx order, cplx z) {
    if (std::abs(z) <= 8.0) return pcf_taylor(order, z);
    if (std::abs(std::arg(z)) <= 0.5 * std::numbers::pi) return pcf_poincare(order, z);
    return pcf_connected(order, z);
}

} // namespace detail

// D_a(z) on the supported region |z| <= 30, |a| <= 6.
inline cplx pcf_D(cplx a, cplx z) {
    if (std::abs(z) > 30.0 || std::abs(a) > 6.0)
        throw pcf_domain_error("pcf_D: outside the supported region |z| <= 30, |a| <= 6");
    return detail::pcf_eval(a, z);
}

} // namespace fnls
