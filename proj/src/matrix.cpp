#include "lwave/matrix.hpp"

#include "lwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace lwave {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidShape("Matrix: data length does not match rows*cols");
    }
}

double sum_squares(const Matrix& m) noexcept {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw InvalidShape("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    }
    return m;
}

} // namespace lwave
