#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qtp {

using Cx = std::complex<double>;

// Dense complex matrix, row-major. Sized for desk-scale registers
// (side <= a few thousand), so everything is plain O(n^3) arithmetic.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<Cx> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {
        if (r < 0 || c < 0) throw std::invalid_argument("Matrix: negative shape");
    }

    Cx& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const Cx& operator()(int r, int c) const {
        return a[static_cast<std::size_t>(r) * cols + c];
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = Cx{1.0, 0.0};
        return m;
    }
};

inline Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("Matrix multiply: shape mismatch");
    Matrix out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int k = 0; k < x.cols; ++k) {
            const Cx xik = x(i, k);
            if (xik == Cx{}) continue;
            for (int j = 0; j < y.cols; ++j) out(i, j) += xik * y(k, j);
        }
    }
    return out;
}

inline std::vector<Cx> operator*(const Matrix& m, const std::vector<Cx>& v) {
    if (static_cast<std::size_t>(m.cols) != v.size())
        throw std::invalid_argument("Matrix apply: shape mismatch");
    std::vector<Cx> out(m.rows);
    for (int i = 0; i < m.rows; ++i) {
        Cx acc{};
        for (int j = 0; j < m.cols; ++j) acc += m(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

inline Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
    return out;
}

inline Matrix adjoint(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

inline Matrix kron(const Matrix& x, const Matrix& y) {
    Matrix out(x.rows * y.rows, x.cols * y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
            const Cx xij = x(i, j);
            for (int p = 0; p < y.rows; ++p)
                for (int q = 0; q < y.cols; ++q)
                    out(i * y.rows + p, j * y.cols + q) = xij * y(p, q);
        }
    return out;
}

// max_ij |(M†M - I)_ij|
inline double unitarity_error(const Matrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("unitarity_error: non-square");
    double worst = 0.0;
    for (int i = 0; i < m.cols; ++i)
        for (int j = 0; j < m.cols; ++j) {
            Cx acc{};
            for (int k = 0; k < m.rows; ++k) acc += std::conj(m(k, i)) * m(k, j);
            if (i == j) acc -= Cx{1.0, 0.0};
            worst = std::max(worst, std::abs(acc));
        }
    return worst;
}

inline double max_abs_diff(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i)
        worst = std::max(worst, std::abs(x.a[i] - y.a[i]));
    return worst;
}

inline Cx trace(const Matrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("trace: non-square");
    Cx acc{};
    for (int i = 0; i < m.rows; ++i) acc += m(i, i);
    return acc;
}

}  // namespace qtp
