#pragma once

// Core scattering-data types shared by every module: discrete spectrum,
// reflection coefficient, space-time cones and sampled complex fields.
// All types are immutable after construction and safe to share.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fnls {

using cplx = std::complex<double>;

struct invariant_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// One discrete eigenvalue z in C+ with its norming constant c.
struct SpectralPoint {
    cplx z;
    cplx c;

    SpectralPoint(cplx z_, cplx c_) : z(z_), c(c_) {
        if (!(z.imag() > 0.0)) throw invariant_error("SpectralPoint: Im(z) must be positive");
        if (c == cplx(0.0)) throw invariant_error("SpectralPoint: norming constant must be nonzero");
    }
};

inline double dist_inf(cplx a, cplx b) {
    return std::max(std::abs(a.real() - b.real()), std::abs(a.imag() - b.imag()));
}

// Finite discrete spectrum, sorted by (Re z, Im z), with the distance
// constants mu = min Im z_k and rho = min(mu, min pairwise inf-norm gap).
class DiscreteSpectrum {
  public:
    DiscreteSpectrum() = default;

    explicit DiscreteSpectrum(std::vector<SpectralPoint> pts) : pts_(std::move(pts)) {
        std::sort(pts_.begin(), pts_.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
            if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
            return a.z.imag() < b.z.imag();
        });
        mu_ = std::numeric_limits<double>::infinity();
        rho_ = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < pts_.size(); ++j) {
            mu_ = std::min(mu_, pts_[j].z.imag());
            for (size_t k = j + 1; k < pts_.size(); ++k) {
                const double d = dist_inf(pts_[j].z, pts_[k].z);
                if (d <= 1e-10)
                    throw invariant_error("DiscreteSpectrum: duplicate pole (inf-norm gap <= 1e-10)");
                rho_ = std::min(rho_, d);
            }
        }
        rho_ = std::min(rho_, mu_);
    }

    const std::vector<SpectralPoint>& points() const { return pts_; }
    size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }
    const SpectralPoint& operator[](size_t k) const { return pts_[k]; }

    // min distance to the real axis; +inf when empty
    double mu() const { return mu_; }
    // min of mu and the smallest pairwise inf-norm separation; +inf when empty
    double rho() const { return rho_; }

  private:
    std::vector<SpectralPoint> pts_;
    double mu_ = std::numeric_limits<double>::infinity();
    double rho_ = std::numeric_limits<double>::infinity();
};

// Reflection coefficient r: R -> C. Zero, sampled (natural cubic spline on a
// uniform grid, clamped to zero outside its support), rational P/Q, or an
// arbitrary in-memory evaluator with declared support.
class ReflectionData {
  public:
    enum class Kind { Zero, Samples, Rational, Custom };

    static ReflectionData zero() {
        ReflectionData r;
        r.kind_ = Kind::Zero;
        r.support_ = {0.0, 0.0};
        return r;
    }

    static ReflectionData samples(double x0, double dx, std::vector<cplx> values) {
        if (dx <= 0.0) throw invariant_error("ReflectionData: dx must be positive");
        if (values.size() < 4) throw invariant_error("ReflectionData: need at least 4 samples");
        ReflectionData r;
        r.kind_ = Kind::Samples;
        r.x0_ = x0;
        r.dx_ = dx;
        r.vals_ = std::move(values);
        r.support_ = {x0, x0 + dx * double(r.vals_.size() - 1)};
        r.build_spline();
        return r;
    }

    // r(s) = P(s)/Q(s), coefficients ascending; requires deg P < deg Q so that
    // r decays, and Q nonvanishing on R.
    static ReflectionData rational(std::vector<cplx> num, std::vector<cplx> den) {
        while (num.size() > 1 && num.back() == cplx(0.0)) num.pop_back();
        while (den.size() > 1 && den.back() == cplx(0.0)) den.pop_back();
        if (den.empty() || (den.size() == 1 && den[0] == cplx(0.0)))
            throw invariant_error("ReflectionData: zero denominator");
        if (num.size() >= den.size())
            throw invariant_error("ReflectionData: rational kind requires deg(num) < deg(den)");
        ReflectionData r;
        r.kind_ = Kind::Rational;
        r.num_ = std::move(num);
        r.den_ = std::move(den);
        for (double s = -100.0; s <= 100.0; s += 0.25)
            if (std::abs(r.poly(r.den_, s)) < 1e-12)
                throw invariant_error("ReflectionData: denominator nearly vanishes on R");
        // effective support: |r| ~ |s|^{-(degQ-degP)} below 1e-9
        const double lead = std::abs(r.num_.back()) / std::abs(r.den_.back());
        const int drop = int(r.den_.size() - r.num_.size());
        const double S = std::max(10.0, std::pow(lead / 1e-9, 1.0 / drop));
        r.support_ = {-S, S};
        return r;
    }

    static ReflectionData custom(std::function<cplx(double)> fn, double support_lo,
                                 double support_hi) {
        if (!(support_lo < support_hi))
            throw invariant_error("ReflectionData: empty custom support");
        ReflectionData r;
        r.kind_ = Kind::Custom;
        r.fn_ = std::move(fn);
        r.support_ = {support_lo, support_hi};
        return r;
    }

    Kind kind() const { return kind_; }
    bool is_zero() const { return kind_ == Kind::Zero; }

    // interval outside which r is treated as identically zero
    std::pair<double, double> support() const { return support_; }

    cplx operator()(double s) const {
        switch (kind_) {
            case Kind::Zero: return {0.0, 0.0};
            case Kind::Samples: {
                if (s <= support_.first || s >= support_.second) return {0.0, 0.0};
                return spline_eval(s);
            }
            case Kind::Rational: return poly(num_, s) / poly(den_, s);
            case Kind::Custom: {
                if (s < support_.first || s > support_.second) return {0.0, 0.0};
                return fn_(s);
            }
        }
        return {0.0, 0.0};
    }

    // sample-grid accessors (Samples kind only)
    double x0() const { return x0_; }
    double dx() const { return dx_; }
    const std::vector<cplx>& values() const { return vals_; }
    const std::vector<cplx>& numerator() const { return num_; }
    const std::vector<cplx>& denominator() const { return den_; }

  private:
    ReflectionData() = default;

    static cplx poly(const std::vector<cplx>& c, double s) {
        cplx acc = 0.0;
        for (size_t k = c.size(); k-- > 0;) acc = acc * s + c[k];
        return acc;
    }

    void build_spline() {
        // natural cubic spline second derivatives (complex-valued)
        const size_t n = vals_.size();
        m2_.assign(n, cplx(0.0));
        std::vector<cplx> rhs(n, cplx(0.0));
        std::vector<double> diag(n, 2.0), sub(n, 0.0);
        for (size_t i = 1; i + 1 < n; ++i)
            rhs[i] = 6.0 * (vals_[i + 1] - 2.0 * vals_[i] + vals_[i - 1]) / (dx_ * dx_);
        // Thomas algorithm on the interior (natural: m2[0] = m2[n-1] = 0)
        std::vector<double> cp(n, 0.0);
        std::vector<cplx> dp(n, cplx(0.0));
        for (size_t i = 1; i + 1 < n; ++i) {
            const double m = (i == 1) ? diag[i] : diag[i] - 0.5 * cp[i - 1];
            cp[i] = 0.5 / m;
            dp[i] = (rhs[i] - ((i == 1) ? cplx(0.0) : 0.5 * dp[i - 1])) / m;
            (void)sub;
        }
        for (size_t i = n - 2; i >= 1; --i) {
            m2_[i] = dp[i] - cp[i] * m2_[i + 1];
            if (i == 1) break;
        }
    }

    cplx spline_eval(double s) const {
        const size_t n = vals_.size();
        double u = (s - x0_) / dx_;
        size_t j = std::min(size_t(std::max(0.0, std::floor(u))), n - 2);
        const double a = u - double(j);
        const double b = 1.0 - a;
        return b * vals_[j] + a * vals_[j + 1] +
               (dx_ * dx_ / 6.0) * ((b * b * b - b) * m2_[j] + (a * a * a - a) * m2_[j + 1]);
    }

    Kind kind_ = Kind::Zero;
    double x0_ = 0.0, dx_ = 0.0;
    std::vector<cplx> vals_, m2_;
    std::vector<cplx> num_, den_;
    std::function<cplx(double)> fn_;
    std::pair<double, double> support_{0.0, 0.0};
};

// The full IST data set D = { r, {(z_k, c_k)} }.
struct ScatteringData {
    ReflectionData r;
    DiscreteSpectrum discrete;

    ScatteringData() : r(ReflectionData::zero()) {}
    ScatteringData(ReflectionData refl, DiscreteSpectrum d)
        : r(std::move(refl)), discrete(std::move(d)) {}
};

// Truncated space-time cone x1 + v1 t <= x <= x2 + v2 t and its spectral
// interval I = [-v2/2, -v1/2].
struct SpaceTimeCone {
    double x1, x2, v1, v2;

    SpaceTimeCone(double x1_, double x2_, double v1_, double v2_)
        : x1(x1_), x2(x2_), v1(v1_), v2(v2_) {
        if (v1 > v2) throw invariant_error("SpaceTimeCone: v1 must be <= v2");
        if (x1 > x2) throw invariant_error("SpaceTimeCone: x1 must be <= x2");
    }

    double interval_lo() const { return -v2 / 2.0; }
    double interval_hi() const { return -v1 / 2.0; }

    bool contains(double x, double t) const {
        return x1 + v1 * t <= x && x <= x2 + v2 * t;
    }
};

// psi(., t) sampled on a uniform spatial grid.
struct ComplexField {
    double x_min = 0.0;
    double dx = 0.0;
    double t = 0.0;
    std::vector<cplx> values;

    ComplexField() = default;
    ComplexField(double x_min_, double dx_, double t_, std::vector<cplx> v)
        : x_min(x_min_), dx(dx_), t(t_), values(std::move(v)) {
        if (!(dx > 0.0)) throw invariant_error("ComplexField: dx must be positive");
        if (values.size() < 2) throw invariant_error("ComplexField: need at least 2 samples");
    }

    double x_at(size_t j) const { return x_min + dx * double(j); }
    size_t size() const { return values.size(); }
};

} // namespace fnls
