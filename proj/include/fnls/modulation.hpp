#pragma once

// Conjugation machinery for the steepest-descent analysis: kappa(s), the
// partial transmission coefficient T(z, xi) with its saddle constant T0(xi),
// the Delta partition of the discrete spectrum at xi, and the two
// modified-norming-constant maps (cone-reduced and outer-model).

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "quadrature.hpp"
#include "soliton.hpp"
#include "types.hpp"

namespace fnls {

// kappa(s) = -log(1 + |r(s)|^2) / (2 pi); <= 0, zero iff r(s) = 0
inline double kappa_of(cplx r_at_s) {
    return -std::log1p(std::norm(r_at_s)) / (2.0 * std::numbers::pi);
}

// (Delta^-, Delta^+): indices with Re z_k < xi and Re z_k >= xi.
inline std::pair<std::vector<int>, std::vector<int>> partition(const DiscreteSpectrum& spec,
                                                               double xi) {
    std::vector<int> minus, plus;
    for (int k = 0; k < int(spec.size()); ++k)
        (spec[size_t(k)].z.real() < xi ? minus : plus).push_back(k);
    return {minus, plus};
}

namespace detail {

// int_{-inf}^{xi} kappa(s)/(s - z) ds; kappa vanishes outside r's support
template <class Kappa>
cplx kappa_cauchy_integral(const Kappa& kap, std::pair<double, double> support, double xi, cplx z,
                           double tol) {
    const double lo = support.first;
    const double hi = std::min(xi, support.second);
    if (!(hi > lo)) return {0.0, 0.0};
    return integrate_with_breaks([&](double s) { return kap(s) / (s - z); }, lo, hi,
                                 {z.real()}, tol);
}

} // namespace detail

// T(z, xi) and its saddle data; fixed (spectrum, r, xi), immutable.
class PartialTransmission {
  public:
    PartialTransmission(const DiscreteSpectrum& spec, ReflectionData r, double xi,
                        double quad_tol = 1e-10)
        : r_(std::move(r)), xi_(xi), tol_(quad_tol) {
        for (const auto& p : spec.points())
            if (p.z.real() < xi) poles_left_.push_back(p.z);
    }

    double xi() const { return xi_; }
    const std::vector<cplx>& poles_left() const { return poles_left_; }
    const ReflectionData& reflection() const { return r_; }

    double kappa(double s) const { return kappa_of(r_(s)); }
    double kappa_at_saddle() const { return kappa(xi_); }

    // T(z) = prod_{left poles} (z - z_k^*)/(z - z_k) * exp(i int kappa/(s-z))
    cplx evaluate(cplx z) const {
        if (z.imag() == 0.0 && z.real() <= xi_)
            throw std::invalid_argument("PartialTransmission: z on the cut (-inf, xi]");
        cplx prod = 1.0;
        for (cplx zk : poles_left_) prod *= (z - std::conj(zk)) / (z - zk);
        const cplx integral =
            detail::kappa_cauchy_integral([&](double s) { return kappa(s); }, r_.support(), xi_,
                                          z, tol_);
        return prod * std::exp(cplx(0.0, 1.0) * integral);
    }

    // beta(z, xi) = -kappa(xi) log(z - xi + 1) + int (kappa(s) - chi kappa(xi))/(s - z)
    // with chi the indicator of (xi - 1, xi); log principally branched.
    cplx beta(cplx z) const {
        const double kxi = kappa_at_saddle();
        auto [rlo, rhi] = r_.support();
        const double lo = std::min(rlo, xi_ - 1.0);
        const double hi = xi_;
        cplx integral = 0.0;
        if (hi > lo) {
            integral = integrate_with_breaks(
                [&](double s) {
                    const double chi = (s > xi_ - 1.0 && s < xi_) ? 1.0 : 0.0;
                    return cplx(kappa(s) - chi * kxi, 0.0) / (s - z);
                },
                lo, hi, {xi_ - 1.0, rlo, rhi, z.real()}, tol_);
        }
        return -kxi * std::log(z - xi_ + 1.0) + integral;
    }

    // beta(xi, xi): the subtracted integrand is regular at s = xi
    double beta_at_saddle() const {
        const double kxi = kappa_at_saddle();
        auto [rlo, rhi] = r_.support();
        const double lo = std::min(rlo, xi_ - 1.0);
        if (!(xi_ > lo)) return 0.0;
        const cplx integral = integrate_with_breaks(
            [&](double s) {
                const double chi = (s > xi_ - 1.0 && s < xi_) ? 1.0 : 0.0;
                const double num = kappa(s) - chi * kxi;
                const double d = s - xi_;
                return cplx(num / d, 0.0);
            },
            lo, xi_, {xi_ - 1.0, rlo, rhi}, tol_);
        return integral.real();
    }

    // T0(xi) = exp( i ( beta(xi,xi) - 2 sum arg(xi - z_k) ) ), a complex unit
    cplx saddle_constant() const {
        double phase = beta_at_saddle();
        for (cplx zk : poles_left_) phase -= 2.0 * std::arg(xi_ - zk);
        return std::exp(cplx(0.0, phase));
    }

  private:
    ReflectionData r_;
    double xi_;
    double tol_;
    std::vector<cplx> poles_left_;
};

// Cone-modulated constants: keep Re z_k in I = [-v2/2, -v1/2]; c_k picks up
// the squared Blaschke product over poles left of I and the reflection
// integral up to xi.
inline std::vector<SpectralPoint> modify_constants_cone(const DiscreteSpectrum& spec,
                                                        const ReflectionData& r,
                                                        const SpaceTimeCone& cone, double xi,
                                                        double quad_tol = 1e-10) {
    const double lo = cone.interval_lo(), hi = cone.interval_hi();
    std::vector<SpectralPoint> out;
    for (size_t k = 0; k < spec.size(); ++k) {
        const cplx zk = spec[k].z;
        if (zk.real() < lo || zk.real() > hi) continue;
        cplx c = spec[k].c;
        for (size_t j = 0; j < spec.size(); ++j) {
            const cplx zj = spec[j].z;
            if (zj.real() < lo) {
                const cplx f = (zk - zj) / (zk - std::conj(zj));
                c *= f * f;
            }
        }
        if (!r.is_zero()) {
            const cplx integral = detail::kappa_cauchy_integral(
                [&](double s) { return kappa_of(r(s)); }, r.support(), xi, zk, quad_tol);
            c *= std::exp(cplx(0.0, -2.0) * integral);
        }
        out.emplace_back(zk, c);
    }
    return out;
}

// Outer-model constants: every pole kept, only the reflection integral.
inline std::vector<SpectralPoint> modify_constants_outer(const DiscreteSpectrum& spec,
                                                         const ReflectionData& r, double xi,
                                                         double quad_tol = 1e-10) {
    std::vector<SpectralPoint> out;
    for (size_t k = 0; k < spec.size(); ++k) {
        cplx c = spec[k].c;
        if (!r.is_zero()) {
            const cplx integral = detail::kappa_cauchy_integral(
                [&](double s) { return kappa_of(r(s)); }, r.support(), xi, spec[k].z, quad_tol);
            c *= std::exp(cplx(0.0, -2.0) * integral);
        }
        out.emplace_back(spec[k].z, c);
    }
    return out;
}

} // namespace fnls
