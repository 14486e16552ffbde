#pragma once

// The explicit parabolic-cylinder model: its matched constants beta12/beta21,
// the sectorwise solution matrix M_PC(zeta, r0), and jump-residual checks on
// the four rays arg zeta = (2j-1) pi/4.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "linalg.hpp"
#include "log_gamma.hpp"
#include "modulation.hpp"
#include "parabolic_cylinder.hpp"

namespace fnls {

struct zero_reflection_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct on_ray_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PCConstants {
    cplx r0;
    double kappa;
    cplx beta12;
    cplx beta21; // = kappa / beta12 = -conj(beta12)
};

inline PCConstants pc_constants(cplx r0) {
    if (r0 == cplx(0.0))
        throw zero_reflection_error("pc_constants: r0 = 0 is degenerate (kappa = 0)");
    PCConstants c;
    c.r0 = r0;
    c.kappa = kappa_of(r0);
    const double pi = std::numbers::pi;
    c.beta12 = std::sqrt(2.0 * pi) * std::exp(cplx(0.0, pi / 4.0)) *
               std::exp(-pi * c.kappa / 2.0) / (r0 * gamma_fn(cplx(0.0, -c.kappa)));
    c.beta21 = c.kappa / c.beta12;
    return c;
}

namespace detail {

// sector index 1..6 from arg zeta; W1 abuts R+ from above, counterclockwise
inline int pc_sector(cplx zeta) {
    const double pi = std::numbers::pi;
    const double a = std::arg(zeta);
    if (a >= 0.0 && a < pi / 4.0) return 1;
    if (a >= pi / 4.0 && a < 3.0 * pi / 4.0) return 2;
    if (a >= 3.0 * pi / 4.0) return 3;
    if (a < -3.0 * pi / 4.0) return 4;
    if (a < -pi / 4.0) return 5;
    return 6;
}

// Phi(zeta, r): entire in zeta, one table per half plane
inline CMatrix pc_phi(cplx zeta, const PCConstants& c, bool upper) {
    const double k = c.kappa;
    const double pi = std::numbers::pi;
    const cplx i{0.0, 1.0};
    const cplx ik{0.0, k};
    CMatrix f(2, 2);
    if (upper) {
        const cplx w_m = std::exp(cplx(0.0, -3.0 * pi / 4.0)) * zeta;
        const cplx w_p = std::exp(cplx(0.0, -pi / 4.0)) * zeta;
        f(0, 0) = std::exp(-3.0 * pi * k / 4.0) * pcf_D(ik, w_m);
        f(0, 1) = -i * c.beta12 * std::exp(pi * (k - cplx(0.0, 1.0)) / 4.0) * pcf_D(-ik - 1.0, w_p);
        f(1, 0) = i * c.beta21 * std::exp(-3.0 * pi * (k + cplx(0.0, 1.0)) / 4.0) *
                  pcf_D(ik - 1.0, w_m);
        f(1, 1) = std::exp(pi * k / 4.0) * pcf_D(-ik, w_p);
    } else {
        const cplx w_m = std::exp(cplx(0.0, pi / 4.0)) * zeta;
        const cplx w_p = std::exp(cplx(0.0, 3.0 * pi / 4.0)) * zeta;
        f(0, 0) = std::exp(pi * k / 4.0) * pcf_D(ik, w_m);
        f(0, 1) = -i * c.beta12 * std::exp(-3.0 * pi * (k - cplx(0.0, 1.0)) / 4.0) *
                  pcf_D(-ik - 1.0, w_p);
        f(1, 0) = i * c.beta21 * std::exp(pi * (k + cplx(0.0, 1.0)) / 4.0) * pcf_D(ik - 1.0, w_m);
        f(1, 1) = std::exp(-3.0 * pi * k / 4.0) * pcf_D(-ik, w_p);
    }
    return f;
}

inline CMatrix pc_pmat(int sector, const PCConstants& c) {
    CMatrix p = CMatrix::identity(2);
    const double denom = 1.0 + std::norm(c.r0);
    switch (sector) {
        case 1: p(1, 0) = -c.r0; break;
        case 3: p(0, 1) = -std::conj(c.r0) / denom; break;
        case 4: p(1, 0) = c.r0 / denom; break;
        case 6: p(0, 1) = std::conj(c.r0); break;
        default: break; // sectors 2 and 5
    }
    return p;
}

// full sector formula; the sector index selects P and the Phi half-plane
// (1..3 upper, 4..6 lower); principal branch for zeta^{-i kappa}
inline CMatrix pc_eval_sector(cplx zeta, int sector, const PCConstants& c) {
    auto m = matmul(pc_phi(zeta, c, sector <= 3), pc_pmat(sector, c));
    const cplx ephase = std::exp(cplx(0.0, 0.25) * zeta * zeta);
    const cplx zpow = std::exp(cplx(0.0, -c.kappa) * std::log(zeta));
    m(0, 0) *= ephase * zpow;
    m(1, 0) *= ephase * zpow;
    m(0, 1) /= ephase * zpow;
    m(1, 1) /= ephase * zpow;
    return m;
}

} // namespace detail

// M_PC(zeta, r0) in the interior of a sector.
inline CMatrix evaluate_M_PC(cplx zeta, cplx r0) {
    if (std::abs(zeta) > 20.0)
        throw pcf_domain_error("evaluate_M_PC: |zeta| <= 20 supported");
    const double pi = std::numbers::pi;
    const double a = std::arg(zeta);
    for (double ray : {pi / 4.0, 3.0 * pi / 4.0, -3.0 * pi / 4.0, -pi / 4.0})
        if (std::abs(std::remainder(a - ray, 2.0 * pi)) < 1e-10)
            throw on_ray_error("evaluate_M_PC: zeta lies on a jump ray; use check_jump");
    const auto c = pc_constants(r0);
    return detail::pc_eval_sector(zeta, detail::pc_sector(zeta), c);
}

// Prescribed jump V_PC on ray j (1..4 for arg pi/4, 3pi/4, -3pi/4, -pi/4).
inline CMatrix pc_jump_matrix(cplx zeta, int ray, cplx r0) {
    const auto c = pc_constants(r0);
    const cplx zpow2 = std::exp(cplx(0.0, -2.0 * c.kappa) * std::log(zeta));
    const cplx osc = std::exp(cplx(0.0, 0.5) * zeta * zeta);
    const double denom = 1.0 + std::norm(r0);
    CMatrix v = CMatrix::identity(2);
    switch (ray) {
        case 1: v(1, 0) = r0 * zpow2 * osc; break;
        case 2: v(0, 1) = std::conj(r0) / denom / (zpow2 * osc); break;
        case 3: v(1, 0) = r0 / denom * zpow2 * osc; break;
        case 4: v(0, 1) = std::conj(r0) / (zpow2 * osc); break;
        default: throw std::invalid_argument("pc_jump_matrix: ray must be 1..4");
    }
    return v;
}

// || M_-^{-1} M_+ - V_PC || on the ray through zeta, with the +/- sides
// evaluated from the adjacent sector formulas (analytic boundary values).
inline double check_jump(cplx zeta, cplx r0) {
    const double r = std::abs(zeta);
    if (r < 0.1 || r > 8.0)
        throw std::invalid_argument("check_jump: require 0.1 <= |zeta| <= 8");
    const double pi = std::numbers::pi;
    const double a = std::arg(zeta);
    int ray = 0;
    if (std::abs(a - pi / 4.0) < 1e-9) ray = 1;
    else if (std::abs(a - 3.0 * pi / 4.0) < 1e-9) ray = 2;
    else if (std::abs(a + 3.0 * pi / 4.0) < 1e-9) ray = 3;
    else if (std::abs(a + pi / 4.0) < 1e-9) ray = 4;
    else throw on_ray_error("check_jump: zeta is not on a jump ray");

    const auto c = pc_constants(r0);
    // plus/minus sectors per the increasing-real-part orientation
    static constexpr int plus_sector[5] = {0, 2, 2, 4, 6};
    static constexpr int minus_sector[5] = {0, 1, 3, 5, 5};
    auto mp = detail::pc_eval_sector(zeta, plus_sector[ray], c);
    auto mm = detail::pc_eval_sector(zeta, minus_sector[ray], c);
    // mm^{-1} mp, det(mm) = 1
    CMatrix inv(2, 2);
    const cplx det = mm(0, 0) * mm(1, 1) - mm(0, 1) * mm(1, 0);
    inv(0, 0) = mm(1, 1) / det;
    inv(0, 1) = -mm(0, 1) / det;
    inv(1, 0) = -mm(1, 0) / det;
    inv(1, 1) = mm(0, 0) / det;
    auto v_num = matmul(inv, mp);
    auto v = pc_jump_matrix(zeta, ray, r0);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(v_num(i, j) - v(i, j)));
    return worst;
}

} // namespace fnls
