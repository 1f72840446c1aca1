#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lwave {

struct Shape4 {
    std::size_t n = 0; // batch
    std::size_t c = 0; // channels
    std::size_t h = 0;
    std::size_t w = 0;

    std::size_t numel() const noexcept { return n * c * h * w; }
    std::size_t plane() const noexcept { return h * w; }
    std::string str() const;

    friend bool operator==(const Shape4&, const Shape4&) = default;
};

/// Batched NCHW feature map of doubles, row-major.
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(Shape4 shape, double fill = 0.0)
        : shape_(shape), data_(shape.numel(), fill) {}
    Tensor4(Shape4 shape, std::vector<double> data);

    const Shape4& shape() const noexcept { return shape_; }
    std::size_t numel() const noexcept { return data_.size(); }

    std::size_t index(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const noexcept {
        return ((n * shape_.c + c) * shape_.h + h) * shape_.w + w;
    }
    double& at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) noexcept {
        return data_[index(n, c, h, w)];
    }
    double at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const noexcept {
        return data_[index(n, c, h, w)];
    }

    /// One (h, w) plane of sample n, channel c.
    std::span<double> plane(std::size_t n, std::size_t c) noexcept {
        return {data_.data() + (n * shape_.c + c) * shape_.plane(), shape_.plane()};
    }
    std::span<const double> plane(std::size_t n, std::size_t c) const noexcept {
        return {data_.data() + (n * shape_.c + c) * shape_.plane(), shape_.plane()};
    }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    double item() const; // value of a single-element tensor
    bool all_finite() const noexcept;

    friend bool operator==(const Tensor4&, const Tensor4&) = default;

private:
    Shape4 shape_;
    std::vector<double> data_;
};

double dot(const Tensor4& a, const Tensor4& b);

} // namespace lwave
