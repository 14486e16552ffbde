#pragma once

// Small dense complex linear algebra: LU with partial pivoting (solve,
// determinant, infinity-norm condition estimate) and a Cholesky-based
// positive definiteness check. Row-major square matrices.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace fnls {

struct linalg_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::complex<double>& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const std::complex<double>& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    static CMatrix identity(int n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<std::complex<double>> a_;
};

inline double inf_norm(const CMatrix& m) {
    double best = 0.0;
    for (int i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

// LU factorization with partial pivoting of a square matrix.
class LU {
  public:
    explicit LU(CMatrix m) : lu_(std::move(m)), piv_(lu_.rows()) {
        const int n = lu_.rows();
        if (lu_.cols() != n) throw linalg_error("LU: matrix not square");
        det_ = 1.0;
        for (int k = 0; k < n; ++k) {
            int p = k;
            double best = std::abs(lu_(k, k));
            for (int i = k + 1; i < n; ++i)
                if (std::abs(lu_(i, k)) > best) { best = std::abs(lu_(i, k)); p = i; }
            piv_[k] = p;
            if (p != k) {
                for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                det_ = -det_;
            }
            const auto pivot = lu_(k, k);
            if (pivot == std::complex<double>(0.0, 0.0)) {
                singular_ = true;
                det_ = 0.0;
                return;
            }
            det_ *= pivot;
            for (int i = k + 1; i < n; ++i) {
                const auto f = lu_(i, k) / pivot;
                lu_(i, k) = f;
                for (int j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
            }
        }
    }

    bool singular() const { return singular_; }
    std::complex<double> det() const { return det_; }

    std::vector<std::complex<double>> solve(std::vector<std::complex<double>> b) const {
        const int n = lu_.rows();
        if (singular_) throw linalg_error("LU: singular matrix");
        if (int(b.size()) != n) throw linalg_error("LU: rhs size mismatch");
        for (int k = 0; k < n; ++k) std::swap(b[k], b[piv_[k]]);
        for (int k = 0; k < n; ++k)
            for (int i = k + 1; i < n; ++i) b[i] -= lu_(i, k) * b[k];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) b[i] -= lu_(i, j) * b[j];
            b[i] /= lu_(i, i);
        }
        return b;
    }

    CMatrix inverse() const {
        const int n = lu_.rows();
        CMatrix inv(n, n);
        std::vector<std::complex<double>> e(n);
        for (int j = 0; j < n; ++j) {
            std::fill(e.begin(), e.end(), std::complex<double>(0.0));
            e[j] = 1.0;
            auto col = solve(e);
            for (int i = 0; i < n; ++i) inv(i, j) = col[i];
        }
        return inv;
    }

  private:
    CMatrix lu_;
    std::vector<int> piv_;
    std::complex<double> det_ = 0.0;
    bool singular_ = false;
};

// Infinity-norm condition number estimate via the explicit inverse;
// systems here are small (2N x 2N with modest N).
inline double condition_inf(const CMatrix& m) {
    LU lu(m);
    if (lu.singular()) return std::numeric_limits<double>::infinity();
    return inf_norm(m) * inf_norm(lu.inverse());
}

// Cholesky test for Hermitian positive definiteness; returns the smallest
// pivot (negative or zero means not positive definite).
inline double hermitian_min_pivot(const CMatrix& m) {
    const int n = m.rows();
    CMatrix l(n, n);
    double min_pivot = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        double d = m(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
        min_pivot = std::min(min_pivot, d);
        if (d <= 0.0) return d;
        const double lj = std::sqrt(d);
        l(j, j) = lj;
        for (int i = j + 1; i < n; ++i) {
            std::complex<double> s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / lj;
        }
    }
    return min_pivot;
}

inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw linalg_error("matmul: shape mismatch");
    CMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const auto aik = a(i, k);
            if (aik == std::complex<double>(0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

} // namespace fnls
