#pragma once

// Adaptive Dormand-Prince RK5(4) for small fixed-size first-order systems.
// The state scalar is a template parameter so the same integrator runs on
// complex values and on Jet<complex> dual numbers (exact parameter
// derivatives without finite differencing).

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace fnls {

struct ode_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// forward-mode dual number: value + directional derivative
template <class T>
struct Jet {
    T v{};
    T d{};

    Jet() = default;
    Jet(T value) : v(value) {}
    Jet(T value, T deriv) : v(value), d(deriv) {}

    friend Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d + b.d}; }
    friend Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d - b.d}; }
    friend Jet operator-(const Jet& a) { return {-a.v, -a.d}; }
    friend Jet operator*(const Jet& a, const Jet& b) {
        return {a.v * b.v, a.v * b.d + a.d * b.v};
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        const T q = a.v / b.v;
        return {q, (a.d - q * b.d) / b.v};
    }
    Jet& operator+=(const Jet& o) { v += o.v; d += o.d; return *this; }
    Jet& operator-=(const Jet& o) { v -= o.v; d -= o.d; return *this; }
};

template <class T>
double abs_value(const std::complex<T>& x) { return std::abs(x); }
template <class T>
double abs_value(const Jet<T>& x) { return abs_value(x.v); }

namespace detail {

// Dormand-Prince coefficients
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_b5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84, 0.0};
inline constexpr double dp_b4[7] = {5179.0 / 57600,  0.0,       7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

} // namespace detail

// Integrate y' = f(x, y) from x0 to x1 (either direction). Error control is
// relative to the current state norm: |err_i| <= tol * (scale + ||y||_inf),
// with scale the floor for states passing through zero.
template <class Scalar, size_t N, class F>
std::array<Scalar, N> integrate_ode(F&& f, std::array<Scalar, N> y, double x0, double x1,
                                    double tol = 1e-11, double scale_floor = 1e-30) {
    if (x0 == x1) return y;
    const double dir = (x1 > x0) ? 1.0 : -1.0;
    double x = x0;
    double h = dir * std::min(0.1, std::abs(x1 - x0));
    const double hmin = 1e-12 * std::abs(x1 - x0);

    std::array<std::array<Scalar, N>, 7> k;
    std::array<Scalar, N> ytmp;

    int consecutive_rejects = 0;
    while (dir * (x1 - x) > 0.0) {
        if (dir * (x + h - x1) > 0.0) h = x1 - x;
        f(x, y, k[0]);
        for (int s = 1; s < 7; ++s) {
            for (size_t i = 0; i < N; ++i) {
                Scalar acc = y[i];
                for (int j = 0; j < s; ++j)
                    acc += Scalar(h * detail::dp_a[s][j]) * k[j][i];
                ytmp[i] = acc;
            }
            f(x + detail::dp_c[s] * h, ytmp, k[s]);
        }
        double ynorm = scale_floor;
        std::array<Scalar, N> y5 = y;
        double err = 0.0;
        for (size_t i = 0; i < N; ++i) {
            Scalar e{};
            for (int s = 0; s < 7; ++s) {
                y5[i] += Scalar(h * detail::dp_b5[s]) * k[s][i];
                e += Scalar(h * (detail::dp_b5[s] - detail::dp_b4[s])) * k[s][i];
            }
            err = std::max(err, abs_value(e));
            ynorm = std::max(ynorm, abs_value(y[i]));
        }
        const double target = tol * ynorm;
        if (err <= target) {
            x += h;
            y = y5;
            consecutive_rejects = 0;
        } else {
            ++consecutive_rejects;
        }
        const double ratio = (err > 0.0) ? std::pow(target / err, 0.2) : 5.0;
        h *= std::clamp(0.9 * ratio, 0.2, 5.0);
        if (std::abs(h) < hmin || consecutive_rejects > 60) {
            std::ostringstream os;
            os << "integrate_ode: step size underflow at x = " << x;
            throw ode_error(os.str());
        }
    }
    return y;
}

} // namespace fnls
