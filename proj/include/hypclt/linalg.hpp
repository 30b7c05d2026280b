#pragma once

/*
 * Small dense linear algebra shared by the digraph and spectral modules.
 *
 * DenseMatrix<T> is a row-major value type used for both double and exact
 * rational arithmetic. Floating point routines that need orthogonal
 * factorizations go through Eigen; the rational routines are plain Gaussian
 * elimination, which is exact for cpp_rational.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "hypclt/errors.hpp"

namespace hypclt {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <class T>
inline constexpr bool is_exact_v = !std::is_floating_point_v<T>;

template <class T>
double to_double(const T& value) {
    if constexpr (std::is_floating_point_v<T>) {
        return static_cast<double>(value);
    } else {
        return value.template convert_to<double>();
    }
}

/// Natural logarithm of a positive arbitrary precision integer.
inline double log_of(const BigInt& value) {
    if (value <= 0) return -std::numeric_limits<double>::infinity();
    const std::size_t bits = boost::multiprecision::msb(value) + 1;
    if (bits <= 1000) return std::log(value.convert_to<double>());
    const std::size_t shift = bits - 64;
    const BigInt top = value >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    DenseMatrix transpose() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        std::vector<T> out(rows_, T(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            T acc(0);
            for (std::size_t j = 0; j < cols_; ++j) {
                if ((*this)(i, j) != T(0)) acc += (*this)(i, j) * v[j];
            }
            out[i] = acc;
        }
        return out;
    }

    DenseMatrix operator*(const DenseMatrix& other) const {
        DenseMatrix out(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == T(0)) continue;
                for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
            }
        return out;
    }

    template <class U>
    DenseMatrix<U> cast() const {
        DenseMatrix<U> out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                if constexpr (std::is_floating_point_v<U>)
                    out(i, j) = to_double((*this)(i, j));
                else
                    out(i, j) = U((*this)(i, j));
            }
        return out;
    }

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
    T acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline Eigen::MatrixXd to_eigen(const DenseMatrix<double>& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline DenseMatrix<double> from_eigen(const Eigen::MatrixXd& m) {
    DenseMatrix<double> out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

/// Basis of the right null space of an exact matrix, one vector per free column.
template <class T>
std::vector<std::vector<T>> exact_null_space(DenseMatrix<T> a) {
    static_assert(is_exact_v<T>);
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a(p, c) == T(0)) ++p;
        if (p == rows) continue;
        if (p != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(p, j), a(r, j));
        const T inv = T(1) / a(r, c);
        for (std::size_t j = 0; j < cols; ++j) a(r, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a(i, c) == T(0)) continue;
            const T f = a(i, c);
            for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
        }
        pivot_cols.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<T> v(cols, T(0));
        v[free] = T(1);
        for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = -a(k, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solves a square system. Exact types use Gaussian elimination, doubles use
/// Eigen's full-pivot LU. Returns nullopt when the matrix is singular.
template <class T>
std::optional<std::vector<T>> solve_square(const DenseMatrix<T>& a, const std::vector<T>& b) {
    const std::size_t n = a.rows();
    if constexpr (std::is_floating_point_v<T>) {
        Eigen::MatrixXd m = to_eigen(a);
        Eigen::VectorXd rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs(i) = b[i];
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        if (!lu.isInvertible()) return std::nullopt;
        Eigen::VectorXd x = lu.solve(rhs);
        return std::vector<double>(x.data(), x.data() + n);
    } else {
        DenseMatrix<T> m = a;
        std::vector<T> rhs = b;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = c;
            while (p < n && m(p, c) == T(0)) ++p;
            if (p == n) return std::nullopt;
            if (p != c) {
                for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
                std::swap(rhs[p], rhs[c]);
            }
            for (std::size_t i = c + 1; i < n; ++i) {
                if (m(i, c) == T(0)) continue;
                const T f = m(i, c) / m(c, c);
                for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
                rhs[i] -= f * rhs[c];
            }
        }
        std::vector<T> x(n, T(0));
        for (std::size_t i = n; i-- > 0;) {
            T acc = rhs[i];
            for (std::size_t j = i + 1; j < n; ++j) acc -= m(i, j) * x[j];
            x[i] = acc / m(i, i);
        }
        return x;
    }
}

template <class T>
std::optional<DenseMatrix<T>> invert(const DenseMatrix<T>& a) {
    const std::size_t n = a.rows();
    DenseMatrix<T> out(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<T> e(n, T(0));
        e[j] = T(1);
        auto col = solve_square(a, e);
        if (!col) return std::nullopt;
        for (std::size_t i = 0; i < n; ++i) out(i, j) = (*col)[i];
    }
    return out;
}

/// Perron root of an irreducible nonnegative matrix.
///
/// Iterates with A + I, which is primitive whenever A is irreducible, and
/// stops once the Collatz-Wielandt bracket min_i (Bx)_i/x_i <= r <= max_i
/// (Bx)_i/x_i is narrower than the relative tolerance.
inline double perron_root_irreducible(const DenseMatrix<double>& a, double tolerance = 1e-12,
                                      std::size_t max_iterations = 2'000'000) {
    const std::size_t n = a.rows();
    if (n == 0) return 0.0;
    std::vector<double> x(n, 1.0);
    std::vector<double> y(n);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = x[i];
            for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * x[j];
            y[i] = acc;
        }
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ratio = y[i] / x[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        if (hi - lo <= tolerance * hi) return 0.5 * (lo + hi) - 1.0;
        const double norm = *std::max_element(y.begin(), y.end());
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
    }
    throw NotConverged("Perron iteration did not converge");
}

}  // namespace hypclt
