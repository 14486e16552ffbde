#pragma once

// Reflectionless Riemann-Hilbert solver. The N-soliton residue conditions
// reduce to a dense 2N x 2N complex linear system; both the standard
// normalization (poles in the first column) and the renormalized one, where
// a chosen index set Delta moves poles to the second column, are assembled
// and solved here. The Delta choice keeps every exponential coefficient
// bounded along the characteristic x = -2 xi t.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "linalg.hpp"
#include "types.hpp"

namespace fnls {

struct ill_conditioned_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct overflow_guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct pole_evaluation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// log gamma_k(x,t) = log c_k + 2i(t z_k^2 + x z_k); always representable.
inline cplx gamma_log(const SpectralPoint& p, double x, double t) {
    return std::log(p.c) + cplx(0.0, 2.0) * (t * p.z * p.z + x * p.z);
}

// gamma_k(x,t) itself; callers needing extreme (x,t) work with gamma_log.
inline cplx gamma_factor(const SpectralPoint& p, double x, double t) {
    const cplx lg = gamma_log(p, x, t);
    if (std::abs(lg.real()) > 700.0)
        throw overflow_guard_error("gamma_factor: exponent exceeds double range, use gamma_log");
    return std::exp(lg);
}

// a_Delta(z) = prod_{k in Delta} (z - z_k)/(z - z_k^*)
inline cplx blaschke_delta(const DiscreteSpectrum& spec, const std::vector<int>& delta, cplx z) {
    cplx prod = 1.0;
    for (int k : delta) {
        const cplx zk = spec[size_t(k)].z;
        prod *= (z - zk) / (z - std::conj(zk));
    }
    return prod;
}

namespace detail {

inline cplx log_blaschke_delta(const DiscreteSpectrum& spec, const std::vector<int>& delta,
                               cplx z) {
    cplx acc = 0.0;
    for (int k : delta) {
        const cplx zk = spec[size_t(k)].z;
        acc += std::log((z - zk) / (z - std::conj(zk)));
    }
    return acc;
}

// log of a_Delta'(z_j) for j in Delta (derivative at the simple zero)
inline cplx log_blaschke_delta_deriv(const DiscreteSpectrum& spec, const std::vector<int>& delta,
                                     int j) {
    const cplx zj = spec[size_t(j)].z;
    cplx acc = -std::log(zj - std::conj(zj));
    for (int k : delta) {
        if (k == j) continue;
        const cplx zk = spec[size_t(k)].z;
        acc += std::log((zj - zk) / (zj - std::conj(zk)));
    }
    return acc;
}

} // namespace detail

// Assembled standard-normalization system in the symmetric (hatted) scaling:
// [[I, -i conj(A)], [-i A, I]] [alpha_hat; beta_hat^*] = [0; conj(gamma)^{1/2}]
// with A_{jk} = -i conj(gamma_j)^{1/2} gamma_k^{1/2} / (z_j^* - z_k).
struct SolitonSystem {
    int n = 0;
    std::vector<cplx> gamma_sqrt; // principal sqrt, fixed per (k,x,t)
    CMatrix matrix;               // 2N x 2N block form
    std::vector<cplx> rhs;        // length 2N
    std::vector<int> delta;       // empty for the standard system

    // the Hermitian positive definite Gram block A
    CMatrix gram() const {
        CMatrix a(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) a(j, k) = cplx(0.0, 1.0) * matrix(n + j, k);
        return a;
    }
};

inline SolitonSystem assemble_standard(const DiscreteSpectrum& spec, double x, double t) {
    const int n = int(spec.size());
    SolitonSystem sys;
    sys.n = n;
    sys.matrix = CMatrix::identity(2 * n);
    sys.rhs.assign(size_t(2 * n), cplx(0.0));
    sys.gamma_sqrt.resize(size_t(n));
    for (int k = 0; k < n; ++k)
        sys.gamma_sqrt[size_t(k)] = std::exp(0.5 * gamma_log(spec[size_t(k)], x, t));
    for (int j = 0; j < n; ++j) {
        const cplx gjs = std::conj(sys.gamma_sqrt[size_t(j)]);
        for (int k = 0; k < n; ++k) {
            const cplx a_jk = cplx(0.0, -1.0) * gjs * sys.gamma_sqrt[size_t(k)] /
                              (std::conj(spec[size_t(j)].z) - spec[size_t(k)].z);
            sys.matrix(n + j, k) = cplx(0.0, -1.0) * a_jk;            // (-i A)_{jk}
            sys.matrix(j, n + k) = cplx(0.0, -1.0) * std::conj(a_jk); // (-i conj(A))_{jk}
        }
        sys.rhs[size_t(n + j)] = gjs;
    }
    return sys;
}

// Partial-fraction coefficients of the solved problem at fixed (x, t).
// For k outside delta the pole z_k carries [[alpha_k,0],[beta_k,0]]; for
// k in delta it carries [[0,beta_k],[0,alpha_k]]; conjugate blocks at z_k^*.
struct MeromorphicSolution {
    std::vector<cplx> alpha, beta;
    std::vector<int> delta; // sorted
    double x = 0.0, t = 0.0;
};

// Delta choice that keeps all exponents bounded: poles left of xi = -x/(2t).
inline std::vector<int> default_delta(const DiscreteSpectrum& spec, double x, double t) {
    std::vector<int> d;
    if (t > 1e-9) {
        const double xi = -x / (2.0 * t);
        for (int k = 0; k < int(spec.size()); ++k)
            if (spec[size_t(k)].z.real() < xi) d.push_back(k);
    }
    return d;
}

inline MeromorphicSolution solve_soliton(const DiscreteSpectrum& spec, double x, double t,
                                         std::vector<int> delta) {
    const int n = int(spec.size());
    std::sort(delta.begin(), delta.end());
    for (int k : delta)
        if (k < 0 || k >= n) throw std::invalid_argument("solve_soliton: delta index out of range");
    MeromorphicSolution sol;
    sol.delta = delta;
    sol.x = x;
    sol.t = t;
    sol.alpha.assign(size_t(n), cplx(0.0));
    sol.beta.assign(size_t(n), cplx(0.0));
    if (n == 0) return sol;

    std::vector<bool> in_delta(size_t(n), false);
    for (int k : delta) in_delta[size_t(k)] = true;

    // weights: g_j = gamma_j a_D(z_j)^2 (j outside delta),
    //          h_j = gamma_j^{-1} a_D'(z_j)^{-2} (j in delta); log-domain first
    std::vector<cplx> w(spec.size());
    for (int j = 0; j < n; ++j) {
        const cplx lg = gamma_log(spec[size_t(j)], x, t);
        cplx lw;
        if (!in_delta[size_t(j)])
            lw = lg + 2.0 * detail::log_blaschke_delta(spec, delta, spec[size_t(j)].z);
        else
            lw = -lg - 2.0 * detail::log_blaschke_delta_deriv(spec, delta, j);
        if (lw.real() > 700.0)
            throw overflow_guard_error("solve_soliton: residue weight overflows double range");
        w[size_t(j)] = std::exp(lw);
    }

    // unknowns u[2k] = alpha_k (k outside delta) or alpha_k^* (k in delta);
    //          u[2k+1] = beta_k^* (outside) or beta_k (in delta)
    CMatrix m = CMatrix::identity(2 * n);
    std::vector<cplx> rhs(size_t(2 * n), cplx(0.0));
    for (int j = 0; j < n; ++j) {
        const cplx zj = spec[size_t(j)].z;
        if (!in_delta[size_t(j)]) {
            const cplx g = w[size_t(j)];
            for (int k = 0; k < n; ++k) {
                const cplx zk = spec[size_t(k)].z;
                if (!in_delta[size_t(k)]) {
                    m(2 * j, 2 * k + 1) += g / (zj - std::conj(zk));
                    m(2 * j + 1, 2 * k) += -std::conj(g) / (std::conj(zj) - zk);
                } else {
                    m(2 * j, 2 * k + 1) += -g / (zj - zk);
                    m(2 * j + 1, 2 * k) += -std::conj(g) / (std::conj(zj) - std::conj(zk));
                }
            }
            rhs[size_t(2 * j + 1)] = std::conj(g);
        } else {
            const cplx h = w[size_t(j)];
            for (int k = 0; k < n; ++k) {
                const cplx zk = spec[size_t(k)].z;
                if (!in_delta[size_t(k)]) {
                    m(2 * j, 2 * k + 1) += -std::conj(h) / (std::conj(zj) - std::conj(zk));
                    m(2 * j + 1, 2 * k) += -h / (zj - zk);
                } else {
                    m(2 * j, 2 * k + 1) += std::conj(h) / (std::conj(zj) - zk);
                    m(2 * j + 1, 2 * k) += -h / (zj - std::conj(zk));
                }
            }
            rhs[size_t(2 * j + 1)] = h;
        }
    }

    // row equilibration by exact powers of two
    for (int i = 0; i < 2 * n; ++i) {
        double mx = 0.0;
        for (int j = 0; j < 2 * n; ++j) mx = std::max(mx, std::abs(m(i, j)));
        mx = std::max(mx, std::abs(rhs[size_t(i)]));
        if (mx == 0.0) continue;
        int e;
        std::frexp(mx, &e);
        const double s = std::ldexp(1.0, -e);
        if (s == 1.0) continue;
        for (int j = 0; j < 2 * n; ++j) m(i, j) *= s;
        rhs[size_t(i)] *= s;
    }

    const double cond = condition_inf(m);
    if (!(cond < 1e12))
        throw ill_conditioned_error("solve_soliton: system condition estimate " +
                                    std::to_string(cond) + " exceeds 1e12");
    LU lu(m);
    auto u = lu.solve(rhs);
    for (int k = 0; k < n; ++k) {
        if (!in_delta[size_t(k)]) {
            sol.alpha[size_t(k)] = u[size_t(2 * k)];
            sol.beta[size_t(k)] = std::conj(u[size_t(2 * k + 1)]);
        } else {
            sol.alpha[size_t(k)] = std::conj(u[size_t(2 * k)]);
            sol.beta[size_t(k)] = u[size_t(2 * k + 1)];
        }
    }
    return sol;
}

inline MeromorphicSolution solve_soliton(const DiscreteSpectrum& spec, double x, double t) {
    return solve_soliton(spec, x, t, default_delta(spec, x, t));
}

// psi(x,t) = lim 2iz m_12(z)
inline cplx reconstruct_psi(const MeromorphicSolution& sol) {
    cplx acc = 0.0;
    std::vector<bool> in_delta(sol.alpha.size(), false);
    for (int k : sol.delta) in_delta[size_t(k)] = true;
    for (size_t k = 0; k < sol.alpha.size(); ++k)
        acc += in_delta[k] ? sol.beta[k] : -std::conj(sol.beta[k]);
    return cplx(0.0, 2.0) * acc;
}

// Max residual of the residue conditions re-substituted into the partial
// fraction form; diagnostic for tests.
inline double residue_residual(const MeromorphicSolution& sol, const DiscreteSpectrum& spec) {
    const int n = int(spec.size());
    std::vector<bool> in_delta(size_t(n), false);
    for (int k : sol.delta) in_delta[size_t(k)] = true;

    double norm_coef = 0.0;
    for (int k = 0; k < n; ++k)
        norm_coef = std::max({norm_coef, std::abs(sol.alpha[size_t(k)]),
                              std::abs(sol.beta[size_t(k)])});
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx zj = spec[size_t(j)].z;
        // regular part of m(z) at z_j (pole term at z_j removed)
        CMatrix mm = CMatrix::identity(2);
        for (int k = 0; k < n; ++k) {
            const cplx zk = spec[size_t(k)].z;
            const cplx ak = sol.alpha[size_t(k)], bk = sol.beta[size_t(k)];
            if (!in_delta[size_t(k)]) {
                if (k != j) {
                    mm(0, 0) += ak / (zj - zk);
                    mm(1, 0) += bk / (zj - zk);
                }
                mm(0, 1) += -std::conj(bk) / (zj - std::conj(zk));
                mm(1, 1) += std::conj(ak) / (zj - std::conj(zk));
            } else {
                if (k != j) {
                    mm(0, 1) += bk / (zj - zk);
                    mm(1, 1) += ak / (zj - zk);
                }
                mm(0, 0) += std::conj(ak) / (zj - std::conj(zk));
                mm(1, 0) += -std::conj(bk) / (zj - std::conj(zk));
            }
        }
        const cplx lg = gamma_log(spec[size_t(j)], sol.x, sol.t);
        if (!in_delta[size_t(j)]) {
            const cplx g = std::exp(lg + 2.0 * detail::log_blaschke_delta(spec, sol.delta, zj));
            // residue at z_j is [[alpha_j, 0], [beta_j, 0]]; condition:
            // res = lim m(z) [[0,0],[g,0]] -> alpha_j = g m_12, beta_j = g m_22
            worst = std::max(worst, std::abs(sol.alpha[size_t(j)] - g * mm(0, 1)));
            worst = std::max(worst, std::abs(sol.beta[size_t(j)] - g * mm(1, 1)));
        } else {
            const cplx h =
                std::exp(-lg - 2.0 * detail::log_blaschke_delta_deriv(spec, sol.delta, j));
            // residue at z_j is [[0, beta_j], [0, alpha_j]]:
            // beta_j = h m_11, alpha_j = h m_21
            worst = std::max(worst, std::abs(sol.beta[size_t(j)] - h * mm(0, 0)));
            worst = std::max(worst, std::abs(sol.alpha[size_t(j)] - h * mm(1, 0)));
        }
    }
    return worst / (1.0 + norm_coef);
}

// Evaluate the solution matrix m^Delta(z) from the partial fractions.
inline CMatrix evaluate_matrix(const MeromorphicSolution& sol, const DiscreteSpectrum& spec,
                               cplx z) {
    const int n = int(spec.size());
    for (int k = 0; k < n; ++k) {
        const cplx zk = spec[size_t(k)].z;
        const double guard = 1e-10 * (1.0 + std::abs(zk));
        if (std::abs(z - zk) < guard || std::abs(z - std::conj(zk)) < guard)
            throw pole_evaluation_error("evaluate_matrix: z coincides with a pole");
    }
    std::vector<bool> in_delta(size_t(n), false);
    for (int k : sol.delta) in_delta[size_t(k)] = true;
    CMatrix m = CMatrix::identity(2);
    for (int k = 0; k < n; ++k) {
        const cplx zk = spec[size_t(k)].z;
        const cplx ak = sol.alpha[size_t(k)], bk = sol.beta[size_t(k)];
        if (!in_delta[size_t(k)]) {
            m(0, 0) += ak / (z - zk);
            m(1, 0) += bk / (z - zk);
            m(0, 1) += -std::conj(bk) / (z - std::conj(zk));
            m(1, 1) += std::conj(ak) / (z - std::conj(zk));
        } else {
            m(0, 1) += bk / (z - zk);
            m(1, 1) += ak / (z - zk);
            m(0, 0) += std::conj(ak) / (z - std::conj(zk));
            m(1, 0) += -std::conj(bk) / (z - std::conj(zk));
        }
    }
    return m;
}

// Cone reduction: keep poles with Re z_k in I = [-v2/2, -v1/2]; constants of
// kept poles pick up the squared Blaschke factor over discarded poles left
// of I.
inline DiscreteSpectrum reduce_to_cone(const DiscreteSpectrum& spec, const SpaceTimeCone& cone) {
    const double lo = cone.interval_lo(), hi = cone.interval_hi();
    std::vector<SpectralPoint> kept;
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
        kept.emplace_back(zk, c);
    }
    return DiscreteSpectrum(std::move(kept));
}

// Exact one-soliton (N = 1 closed form): amplitude 2 eta, speed -2 xi.
inline cplx one_soliton(cplx z, cplx c, double x, double t) {
    const double xi = z.real(), eta = z.imag();
    const double x0 = std::log(std::abs(c) / (2.0 * eta)) / (2.0 * eta);
    const double phi0 = std::numbers::pi / 2.0 + std::arg(c);
    const double arg_sech = 2.0 * eta * (x + 2.0 * xi * t - x0);
    const double sech = 1.0 / std::cosh(arg_sech);
    return 2.0 * eta * sech *
           std::exp(cplx(0.0, -2.0 * (xi * x + (xi * xi - eta * eta) * t))) *
           std::exp(cplx(0.0, -phi0));
}

} // namespace fnls
