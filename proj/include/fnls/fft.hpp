#pragma once

// In-place radix-2 complex FFT with precomputed twiddles. Grid sizes are
// powers of two throughout this library, so no general-length machinery.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fnls {

class Fft {
  public:
    explicit Fft(size_t n) : n_(n) {
        if (n < 2 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Fft: size must be a power of two >= 2");
        rev_.resize(n);
        size_t log2n = 0;
        while ((size_t(1) << log2n) < n) ++log2n;
        for (size_t i = 0; i < n; ++i) {
            size_t r = 0;
            for (size_t b = 0; b < log2n; ++b)
                if (i & (size_t(1) << b)) r |= size_t(1) << (log2n - 1 - b);
            rev_[i] = r;
        }
        tw_.resize(n / 2);
        for (size_t k = 0; k < n / 2; ++k) {
            const double ang = -2.0 * std::numbers::pi * double(k) / double(n);
            tw_[k] = {std::cos(ang), std::sin(ang)};
        }
    }

    size_t size() const { return n_; }

    // forward: X_k = sum_j x_j e^{-2 pi i j k / n}
    void forward(std::vector<std::complex<double>>& x) const { transform(x, false); }

    // inverse with 1/n normalization
    void inverse(std::vector<std::complex<double>>& x) const {
        transform(x, true);
        const double s = 1.0 / double(n_);
        for (auto& v : x) v *= s;
    }

    // frequency k_j = 2 pi j / length for j in [-n/2, n/2), laid out in FFT order
    static std::vector<double> wavenumbers(size_t n, double length) {
        std::vector<double> k(n);
        const double dk = 2.0 * std::numbers::pi / length;
        for (size_t j = 0; j < n; ++j) {
            const double m = (j < n / 2) ? double(j) : double(j) - double(n);
            k[j] = dk * m;
        }
        return k;
    }

  private:
    void transform(std::vector<std::complex<double>>& x, bool inv) const {
        if (x.size() != n_) throw std::invalid_argument("Fft: length mismatch");
        for (size_t i = 0; i < n_; ++i)
            if (rev_[i] > i) std::swap(x[i], x[rev_[i]]);
        for (size_t len = 2; len <= n_; len <<= 1) {
            const size_t step = n_ / len;
            for (size_t i = 0; i < n_; i += len) {
                for (size_t j = 0; j < len / 2; ++j) {
                    auto w = tw_[j * step];
                    if (inv) w = std::conj(w);
                    const auto u = x[i + j];
                    const auto v = x[i + j + len / 2] * w;
                    x[i + j] = u + v;
                    x[i + j + len / 2] = u - v;
                }
            }
        }
    }

    size_t n_;
    std::vector<size_t> rev_;
    std::vector<std::complex<double>> tw_;
};

} // namespace fnls
