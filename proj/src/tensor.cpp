#include "lwave/tensor.hpp"

#include "lwave/error.hpp"

#include <cmath>
#include <utility>

namespace lwave {

std::string Shape4::str() const {
    return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
           std::to_string(w) + ")";
}

Tensor4::Tensor4(Shape4 shape, std::vector<double> data)
    : shape_(shape), data_(std::move(data)) {
    if (data_.size() != shape_.numel()) {
        throw ShapeError("Tensor4: data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_.str());
    }
}

double Tensor4::item() const {
    if (data_.size() != 1) throw ShapeError("Tensor4::item on tensor of shape " + shape_.str());
    return data_[0];
}

bool Tensor4::all_finite() const noexcept {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double dot(const Tensor4& a, const Tensor4& b) {
    if (a.shape() != b.shape()) throw ShapeError("dot: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

} // namespace lwave
