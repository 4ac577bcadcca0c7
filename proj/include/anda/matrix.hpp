#pragma once

#include <cstddef>
#include <vector>

#include "anda/errors.hpp"

namespace anda {

// Dense row-major matrix. Small by design: the toolkit only needs storage,
// indexing, and shape checks.
template <typename T>
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, T fill = T{}) : rows(r), cols(c), data(r * c, fill) {}

    T& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const T& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }

    bool operator==(const Matrix&) const = default;
};

template <typename T>
inline void require_same_shape(const Matrix<T>& a, const Matrix<T>& b) {
    if (!a.same_shape(b)) throw ShapeMismatch();
}

} // namespace anda
