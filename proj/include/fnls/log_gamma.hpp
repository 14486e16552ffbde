#pragma once

// Complex log-gamma on the principal branch, continuous in the right half
// plane. Lanczos rational approximation (g = 607/128, 15 terms) with the
// reflection formula for Re(w) < 0.5. Relative accuracy ~1e-14 for |w| <= 50.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace fnls {

using cplx = std::complex<double>;

struct gamma_pole_error : std::domain_error {
    using std::domain_error::domain_error;
};

namespace detail {

inline constexpr double lanczos_g = 607.0 / 128.0;
inline constexpr double lanczos_c[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

// valid for Re(w) >= 0.5
inline cplx log_gamma_lanczos(cplx w) {
    cplx s = lanczos_c[0];
    for (int k = 1; k < 15; ++k) s += lanczos_c[k] / (w + double(k - 1));
    const cplx t = w - 0.5 + lanczos_g;
    constexpr double half_log_two_pi = 0.91893853320467274178;
    return half_log_two_pi + (w - 0.5) * std::log(t) - t + std::log(s);
}

// log(sin(pi w)) without overflow for large |Im w|; may differ from the
// principal value by a multiple of 2*pi*i.
inline cplx log_sin_pi(cplx w) {
    const double pi = std::numbers::pi;
    if (w.imag() >= 0.0) {
        // sin(pi w) = -e^{-i pi w}(1 - e^{2 i pi w})/(2i)
        return cplx(0.0, -pi) * w + std::log(1.0 - std::exp(cplx(0.0, 2.0 * pi) * w)) +
               std::log(cplx(0.0, 0.5));
    }
    return cplx(0.0, pi) * w + std::log(1.0 - std::exp(cplx(0.0, -2.0 * pi) * w)) +
           std::log(cplx(0.0, -0.5));
}

} // namespace detail

// log Gamma(w); principal branch for Re(w) >= 0.5, continuous there.
// For Re(w) < 0.5 the value is correct modulo 2*pi*i (exp of it is exact).
inline cplx log_gamma(cplx w) {
    const double nearest = std::round(w.real());
    if (nearest <= 0.0 && std::abs(w - cplx(nearest, 0.0)) < 1e-12)
        throw gamma_pole_error("log_gamma: argument within 1e-12 of a nonpositive integer");
    if (w.real() >= 0.5) return detail::log_gamma_lanczos(w);
    // reflection: Gamma(w) Gamma(1-w) = pi / sin(pi w)
    constexpr double log_pi = 1.1447298858494001741;
    return log_pi - detail::log_sin_pi(w) - detail::log_gamma_lanczos(1.0 - w);
}

inline cplx gamma_fn(cplx w) { return std::exp(log_gamma(w)); }

// 1/Gamma(w); entire, returns 0 at nonpositive integers.
inline cplx reciprocal_gamma(cplx w) {
    const double nearest = std::round(w.real());
    if (nearest <= 0.0 && std::abs(w - cplx(nearest, 0.0)) < 1e-12) return {0.0, 0.0};
    return std::exp(-log_gamma(w));
}

} // namespace fnls
