#pragma once

// Forward scattering for the ZS-AKNS system: Jost solutions by adaptive
// Runge-Kutta on the oscillation-removed variable m (m' = -iz[sigma3,m]+Psi m),
// scattering coefficients a, b, discrete eigenvalues by the argument
// principle with Newton refinement, norming constants from Jost-column
// proportionality, and the trace formula check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "linalg.hpp"
#include "log_gamma.hpp"
#include "ode.hpp"
#include "quadrature.hpp"
#include "types.hpp"

namespace fnls {

struct spectral_singularity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct count_mismatch_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct multiplicity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct proportionality_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Initial data psi0 with effective support [-L, L].
class Potential {
  public:
    static Potential zero() {
        Potential p;
        p.fn_ = [](double) { return cplx(0.0); };
        p.radius_ = 1.0;
        p.max_abs_ = 0.0;
        p.tag_ = "zero";
        return p;
    }

    // A sech(x - x0) e^{i v x}
    static Potential sech(double amplitude, double x0 = 0.0, double velocity = 0.0) {
        Potential p;
        p.fn_ = [=](double x) {
            return amplitude / std::cosh(x - x0) * std::exp(cplx(0.0, velocity * x));
        };
        p.radius_ = std::abs(x0) + std::log(2.0 * std::max(std::abs(amplitude), 1.0) / 1e-15);
        p.max_abs_ = std::abs(amplitude);
        p.tag_ = "sech";
        p.validate();
        return p;
    }

    // q0 on [0, L], zero elsewhere
    static Potential box(cplx q0, double length) {
        if (!(length > 0.0)) throw invariant_error("Potential::box: length must be positive");
        Potential p;
        p.fn_ = [=](double x) { return (x >= 0.0 && x <= length) ? q0 : cplx(0.0); };
        p.radius_ = length + 0.25;
        p.breaks_ = {0.0, length};
        p.max_abs_ = std::abs(q0);
        p.tag_ = "box";
        return p;
    }

    // A exp(-(x-x0)^2/(2 sigma^2)) e^{i v x}
    static Potential gaussian(double amplitude, double sigma = 1.0, double x0 = 0.0,
                              double velocity = 0.0) {
        if (!(sigma > 0.0)) throw invariant_error("Potential::gaussian: sigma must be positive");
        Potential p;
        p.fn_ = [=](double x) {
            const double u = (x - x0) / sigma;
            return amplitude * std::exp(-0.5 * u * u) * std::exp(cplx(0.0, velocity * x));
        };
        p.radius_ = std::abs(x0) + sigma * std::sqrt(2.0 * std::log(std::max(std::abs(amplitude), 1.0) * 1e15));
        p.max_abs_ = std::abs(amplitude);
        p.tag_ = "gaussian";
        p.validate();
        return p;
    }

    static Potential custom(std::function<cplx(double)> fn, double radius,
                            std::vector<double> breakpoints = {}, std::string tag = "custom") {
        Potential p;
        p.fn_ = std::move(fn);
        p.radius_ = radius;
        p.breaks_ = std::move(breakpoints);
        p.tag_ = std::move(tag);
        double mx = 0.0;
        for (double x = -radius; x <= radius; x += radius / 512.0)
            mx = std::max(mx, std::abs(p.fn_(x)));
        p.max_abs_ = mx;
        p.validate();
        return p;
    }

    cplx operator()(double x) const { return fn_(x); }
    double radius() const { return radius_; }
    double max_abs() const { return max_abs_; }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::string& tag() const { return tag_; }

  private:
    void validate() const {
        if (std::abs(fn_(radius_)) > 1e-10 || std::abs(fn_(-radius_)) > 1e-10)
            throw invariant_error("Potential: |psi0| at +-L exceeds the truncation tolerance");
    }

    std::function<cplx(double)> fn_;
    double radius_ = 0.0;
    double max_abs_ = 0.0;
    std::vector<double> breaks_;
    std::string tag_;
};

enum class JostSide { Left, Right }; // Left: m^(-) from -L; Right: m^(+) from +L

namespace detail {

// promote a plain complex into the scalar type (Jet gets zero derivative)
inline cplx lift(cplx v, cplx) { return v; }
inline Jet<cplx> lift(cplx v, Jet<cplx>) { return Jet<cplx>{v, cplx(0.0)}; }

// integrate across the potential's breakpoints in sequence
template <class Sc, size_t N, class F>
std::array<Sc, N> integrate_piecewise(const Potential& pot, F&& f, std::array<Sc, N> y, double x0,
                                      double x1, double tol) {
    std::vector<double> pts{x0};
    if (x1 > x0) {
        for (double b : pot.breakpoints())
            if (b > x0 && b < x1) pts.push_back(b);
        std::sort(pts.begin(), pts.end());
    } else {
        for (double b : pot.breakpoints())
            if (b < x0 && b > x1) pts.push_back(b);
        std::sort(pts.begin(), pts.end(), std::greater<>());
    }
    pts.push_back(x1);
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        y = integrate_ode<Sc, N>(f, y, pts[i], pts[i + 1], tol);
    return y;
}

// first column of m^(-): (m11, m21)' = (psi m21, 2iz m21 - conj(psi) m11)
template <class Sc>
std::array<Sc, 2> jost_minus_col1(const Potential& pot, Sc z, double x_end, double tol) {
    auto rhs = [&](double x, const std::array<Sc, 2>& y, std::array<Sc, 2>& dy) {
        const cplx psi = pot(x);
        dy[0] = lift(psi, z) * y[1];
        dy[1] = Sc(cplx(0.0, 2.0)) * z * y[1] - lift(std::conj(psi), z) * y[0];
    };
    std::array<Sc, 2> y{Sc(cplx(1.0)), Sc(cplx(0.0))};
    return integrate_piecewise<Sc, 2>(pot, rhs, y, -pot.radius(), x_end, tol);
}

// second column of m^(+): (m12, m22)' = (-2iz m12 + psi m22, -conj(psi) m12)
template <class Sc>
std::array<Sc, 2> jost_plus_col2(const Potential& pot, Sc z, double x_end, double tol) {
    auto rhs = [&](double x, const std::array<Sc, 2>& y, std::array<Sc, 2>& dy) {
        const cplx psi = pot(x);
        dy[0] = Sc(cplx(0.0, -2.0)) * z * y[0] + lift(psi, z) * y[1];
        dy[1] = -lift(std::conj(psi), z) * y[0];
    };
    std::array<Sc, 2> y{Sc(cplx(0.0)), Sc(cplx(1.0))};
    return integrate_piecewise<Sc, 2>(pot, rhs, y, pot.radius(), x_end, tol);
}

// full 2x2 system, state (m11, m12, m21, m22)
inline std::array<cplx, 4> jost_full(const Potential& pot, cplx z, double x_start, double x_end,
                                     std::array<cplx, 4> y, double tol) {
    auto rhs = [&](double x, const std::array<cplx, 4>& m, std::array<cplx, 4>& dm) {
        const cplx psi = pot(x);
        const cplx psic = std::conj(psi);
        const cplx tz = cplx(0.0, 2.0) * z;
        dm[0] = psi * m[2];
        dm[1] = -tz * m[1] + psi * m[3];
        dm[2] = tz * m[2] - psic * m[0];
        dm[3] = -psic * m[1];
    };
    return integrate_piecewise<cplx, 4>(pot, rhs, y, x_start, x_end, tol);
}

} // namespace detail

// Jost matrix integrated across the support: side Left gives m^(-)(+L, z),
// side Right gives m^(+)(-L, z). det = 1 up to solver tolerance.
inline CMatrix integrate_jost(const Potential& pot, cplx z, JostSide side, double tol = 1e-12) {
    const double L = pot.radius();
    std::array<cplx, 4> y{1.0, 0.0, 0.0, 1.0};
    y = (side == JostSide::Left) ? detail::jost_full(pot, z, -L, L, y, tol)
                                 : detail::jost_full(pot, z, L, -L, y, tol);
    CMatrix m(2, 2);
    m(0, 0) = y[0];
    m(0, 1) = y[1];
    m(1, 0) = y[2];
    m(1, 1) = y[3];
    return m;
}

struct ScatteringCoefficients {
    cplx a;
    cplx b; // only meaningful for real z
    cplx z;
};

// a(z) for Im z >= 0 via the analytic Jost columns; b(z) for real z from
// det[m1+, m1-] at x = 0 (the e^{-2izy} phase convention collapses there).
inline ScatteringCoefficients scattering_coeffs(const Potential& pot, cplx z,
                                                double tol = 1e-11) {
    ScatteringCoefficients out;
    out.z = z;
    if (z.imag() == 0.0) {
        const double L = pot.radius();
        std::array<cplx, 4> id{1.0, 0.0, 0.0, 1.0};
        auto mm = detail::jost_full(pot, z, -L, 0.0, id, tol);
        auto mp = detail::jost_full(pot, z, L, 0.0, id, tol);
        out.a = mm[0] * mp[3] - mm[2] * mp[1]; // det[m1-, m2+]
        out.b = mp[0] * mm[2] - mp[2] * mm[0]; // det[m1+, m1-]
        if (std::abs(out.a) < 1e-6) {
            std::ostringstream os;
            os << "spectral singularity: |a| = " << std::abs(out.a) << " at z = " << z.real();
            throw spectral_singularity_error(os.str());
        }
    } else {
        auto cm = detail::jost_minus_col1<cplx>(pot, z, 0.0, tol);
        auto cp = detail::jost_plus_col2<cplx>(pot, z, 0.0, tol);
        out.a = cm[0] * cp[1] - cm[1] * cp[0];
        out.b = 0.0;
    }
    return out;
}

// a(z) together with a'(z), by forward-mode differentiation of the Jost
// integration (no finite-difference cancellation).
inline std::pair<cplx, cplx> a_with_derivative(const Potential& pot, cplx z, double tol = 1e-11) {
    using J = Jet<cplx>;
    const J zj{z, cplx(1.0)};
    auto cm = detail::jost_minus_col1<J>(pot, zj, 0.0, tol);
    auto cp = detail::jost_plus_col2<J>(pot, zj, 0.0, tol);
    const J a = cm[0] * cp[1] - cm[1] * cp[0];
    return {a.v, a.d};
}

struct SearchBox {
    double re_lo, re_hi, im_lo, im_hi;

    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
    double diameter() const { return std::max(width(), height()); }
    bool contains(cplx z, double pad = 0.0) const {
        return z.real() >= re_lo - pad && z.real() <= re_hi + pad && z.imag() >= im_lo - pad &&
               z.imag() <= im_hi + pad;
    }
};

inline SearchBox default_search_box(const Potential& pot) {
    const double zmax = 1.0 + pot.max_abs() * pot.radius();
    return {-zmax, zmax, 1e-3, zmax};
}

namespace detail {

// phase-tracked winding number of a(z) along the rectangle boundary
inline int winding_number(const Potential& pot, const SearchBox& box, double ode_tol) {
    const cplx c0{box.re_lo, box.im_lo}, c1{box.re_hi, box.im_lo}, c2{box.re_hi, box.im_hi},
        c3{box.re_lo, box.im_hi};
    struct Node {
        cplx z;
        cplx a;
    };
    auto eval = [&](cplx z) {
        auto cm = jost_minus_col1<cplx>(pot, z, 0.0, ode_tol);
        auto cp = jost_plus_col2<cplx>(pot, z, 0.0, ode_tol);
        const cplx a = cm[0] * cp[1] - cm[1] * cp[0];
        if (std::abs(a) < 1e-8)
            throw count_mismatch_error("winding_number: zero of a(z) on the box boundary");
        return a;
    };
    std::vector<Node> nodes;
    auto seed_edge = [&](cplx za, cplx zb) {
        const int n0 = std::max(4, std::min(48, int(std::abs(zb - za) / 0.35)));
        for (int i = 0; i < n0; ++i) {
            const double s = double(i) / double(n0);
            const cplx z = za + s * (zb - za);
            nodes.push_back({z, eval(z)});
        }
    };
    seed_edge(c0, c1);
    seed_edge(c1, c2);
    seed_edge(c2, c3);
    seed_edge(c3, c0);
    nodes.push_back(nodes.front()); // close the loop

    double total = 0.0;
    size_t i = 0;
    int inserted = 0;
    while (i + 1 < nodes.size()) {
        const double dphi = std::arg(nodes[i + 1].a / nodes[i].a);
        if (std::abs(dphi) <= 1.2 || std::abs(nodes[i + 1].z - nodes[i].z) < 1e-7) {
            total += dphi;
            ++i;
            continue;
        }
        if (++inserted > 20000)
            throw count_mismatch_error("winding_number: phase tracking did not converge");
        const cplx zm = 0.5 * (nodes[i].z + nodes[i + 1].z);
        nodes.insert(nodes.begin() + long(i) + 1, {zm, eval(zm)});
    }
    const double w = total / (2.0 * std::numbers::pi);
    const int wi = int(std::lround(w));
    if (std::abs(w - double(wi)) > 0.2)
        throw count_mismatch_error("winding_number: non-integer winding " + std::to_string(w));
    return wi;
}

inline void collect_roots(const Potential& pot, const SearchBox& box, int winding,
                          std::vector<cplx>& roots, double ode_tol, int depth) {
    if (winding == 0) return;
    if (depth > 60 || box.diameter() < 1e-6)
        throw multiplicity_error("find_discrete_spectrum: unresolvable zero cluster (multiple or "
                                 "coalescing eigenvalues)");
    if (winding == 1 && box.diameter() <= 0.2) {
        // Newton refinement from the box center
        cplx z{0.5 * (box.re_lo + box.re_hi), 0.5 * (box.im_lo + box.im_hi)};
        bool done = false;
        for (int it = 0; it < 80; ++it) {
            auto [a, ap] = a_with_derivative(pot, z, 1e-12);
            if (std::abs(a) <= 1e-10) {
                done = true;
                break;
            }
            const cplx step = a / ap;
            z -= step;
            if (!box.contains(z, 2.0 * box.diameter()))
                throw count_mismatch_error("find_discrete_spectrum: Newton left the bracket box");
        }
        if (!done)
            throw count_mismatch_error("find_discrete_spectrum: Newton failed to reach |a| <= 1e-10");
        roots.push_back(z);
        return;
    }
    // split along the longer dimension, retrying cut positions that avoid
    // boundary zeros
    const bool split_re = box.width() >= box.height();
    for (double f : {0.5, 0.46, 0.56, 0.42, 0.6}) {
        SearchBox b1 = box, b2 = box;
        if (split_re) {
            const double cut = box.re_lo + f * box.width();
            b1.re_hi = cut;
            b2.re_lo = cut;
        } else {
            const double cut = box.im_lo + f * box.height();
            b1.im_hi = cut;
            b2.im_lo = cut;
        }
        try {
            const int w1 = winding_number(pot, b1, ode_tol);
            const int w2 = winding_number(pot, b2, ode_tol);
            if (w1 + w2 != winding)
                throw count_mismatch_error(
                    "find_discrete_spectrum: winding split mismatch (" + std::to_string(w1) + "+" +
                    std::to_string(w2) + " != " + std::to_string(winding) + ")");
            collect_roots(pot, b1, w1, roots, ode_tol, depth + 1);
            collect_roots(pot, b2, w2, roots, ode_tol, depth + 1);
            return;
        } catch (const count_mismatch_error&) {
            if (f == 0.6) throw; // last cut attempt
        }
    }
}

} // namespace detail

// All zeros of a(z) inside the box, argument-principle counted and Newton
// refined to |a| <= 1e-10. Returned sorted by (Re, Im).
inline std::vector<cplx> find_discrete_spectrum(const Potential& pot, const SearchBox& box,
                                                double ode_tol = 1e-9) {
    if (box.im_lo < 1e-3)
        throw std::invalid_argument("find_discrete_spectrum: box must have Im >= 1e-3");
    const int w = detail::winding_number(pot, box, ode_tol);
    std::vector<cplx> roots;
    detail::collect_roots(pot, box, w, roots, ode_tol, 0);
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    for (size_t i = 0; i + 1 < roots.size(); ++i)
        if (dist_inf(roots[i], roots[i + 1]) <= 1e-10)
            throw count_mismatch_error("find_discrete_spectrum: Newton merged two roots");
    if (int(roots.size()) != w)
        throw count_mismatch_error("find_discrete_spectrum: root count " +
                                   std::to_string(roots.size()) + " != winding " +
                                   std::to_string(w));
    return roots;
}

inline std::vector<cplx> find_discrete_spectrum(const Potential& pot) {
    return find_discrete_spectrum(pot, default_search_box(pot));
}

struct NormingResult {
    std::vector<SpectralPoint> points; // (z_k, c_k) with c_k = gamma_k / a'(z_k)
    std::vector<cplx> gammas;          // column proportionality constants at x = 0
};

// Norming constants from Phi1^-(x, z_k) = gamma_k Phi2^+(x, z_k), measured
// at x = 0 and cross-checked at x = -L/2 and +L/2.
inline NormingResult norming_constants(const Potential& pot, const std::vector<cplx>& zs,
                                       double tol = 1e-12) {
    NormingResult out;
    const double L = pot.radius();
    for (cplx zk : zs) {
        auto [a, ap] = a_with_derivative(pot, zk, tol);
        if (std::abs(a) > 1e-8)
            throw std::invalid_argument("norming_constants: input z is not an eigenvalue (|a| > 1e-8)");

        auto gamma_at = [&](double x) {
            auto cm = detail::jost_minus_col1<cplx>(pot, zk, x, tol);
            auto cp = detail::jost_plus_col2<cplx>(pot, zk, x, tol);
            const int j = (std::abs(cp[0]) >= std::abs(cp[1])) ? 0 : 1;
            return std::exp(cplx(0.0, -2.0) * zk * x) * cm[size_t(j)] / cp[size_t(j)];
        };
        const cplx g0 = gamma_at(0.0);
        const cplx gl = gamma_at(-L / 2.0);
        const cplx gr = gamma_at(L / 2.0);
        const double dev = std::abs(gl - gr) / std::max(std::abs(gl), std::abs(gr));
        if (dev > 1e-4) {
            std::ostringstream os;
            os << "norming_constants: Jost column ratios at +-L/2 disagree by " << dev
               << " at z = (" << zk.real() << ", " << zk.imag() << ")";
            throw proportionality_error(os.str());
        }
        out.points.emplace_back(zk, g0 / ap);
        out.gammas.push_back(g0);
    }
    return out;
}

struct TraceCheck {
    cplx lhs; // 1/a(z) from the ODE route
    cplx rhs; // Blaschke product times the log-integral exponential
    double residual;
};

// Right-hand side of the trace formula at z in C+:
// prod (z - z_k^*)/(z - z_k) * exp( (2 pi i)^{-1} int log(1+|r|^2)/(s-z) ds ).
inline cplx trace_formula_rhs(const ScatteringData& data, cplx z, double quad_tol = 1e-10) {
    cplx prod = 1.0;
    for (const auto& p : data.discrete.points())
        prod *= (z - std::conj(p.z)) / (z - p.z);
    auto [lo, hi] = data.r.support();
    cplx integral = 0.0;
    if (!data.r.is_zero() && hi > lo) {
        integral = integrate_with_breaks(
            [&](double s) {
                const double as2 = std::norm(data.r(s));
                return std::log1p(as2) / (s - z);
            },
            lo, hi, {z.real()}, quad_tol);
    }
    return prod * std::exp(integral / cplx(0.0, 2.0 * std::numbers::pi));
}

// Compare 1/a(z) from the ODE route against the trace formula.
inline TraceCheck verify_trace_formula(const Potential& pot, const ScatteringData& data, cplx z,
                                       double quad_tol = 1e-10) {
    if (std::abs(z.imag()) < 1e-2)
        throw std::invalid_argument("verify_trace_formula: z must be at distance >= 1e-2 from R");
    for (const auto& p : data.discrete.points())
        if (std::abs(z - p.z) < 1e-2 || std::abs(z - std::conj(p.z)) < 1e-2)
            throw std::invalid_argument("verify_trace_formula: z too close to the discrete spectrum");
    const bool lower = z.imag() < 0.0;
    const cplx zu = lower ? std::conj(z) : z;

    TraceCheck out;
    out.lhs = 1.0 / scattering_coeffs(pot, zu).a;
    out.rhs = trace_formula_rhs(data, zu, quad_tol);
    if (lower) {
        out.lhs = std::conj(out.lhs);
        out.rhs = std::conj(out.rhs);
    }
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

// Uniform r samples on [lo, hi] (n points), as a sampled ReflectionData.
inline ReflectionData sample_reflection(const Potential& pot, double lo, double hi, int n,
                                        double tol = 1e-11) {
    if (n < 4) throw std::invalid_argument("sample_reflection: need at least 4 samples");
    const double dx = (hi - lo) / double(n - 1);
    std::vector<cplx> vals(static_cast<size_t>(n), cplx(0.0));
    for (int i = 0; i < n; ++i) {
        const double s = lo + dx * i;
        auto sc = scattering_coeffs(pot, {s, 0.0}, tol);
        vals[size_t(i)] = sc.b / sc.a;
    }
    return ReflectionData::samples(lo, dx, std::move(vals));
}

} // namespace fnls
