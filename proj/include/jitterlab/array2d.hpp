#pragma once

#include <jitterlab/errors.hpp>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace jitterlab {

// Time-major N x M record: row n holds the M channel values at sample n.
template <typename T>
class Array2D {
public:
    Array2D() = default;
    Array2D(std::size_t samples, std::size_t channels, T fill = T{})
        : samples_(samples), channels_(channels), data_(samples * channels, fill) {}

    std::size_t samples() const noexcept { return samples_; }
    std::size_t channels() const noexcept { return channels_; }

    T& operator()(std::size_t n, std::size_t m) noexcept { return data_[n * channels_ + m]; }
    const T& operator()(std::size_t n, std::size_t m) const noexcept { return data_[n * channels_ + m]; }

    std::span<T> row(std::size_t n) noexcept { return {data_.data() + n * channels_, channels_}; }
    std::span<const T> row(std::size_t n) const noexcept { return {data_.data() + n * channels_, channels_}; }

    std::vector<T> column(std::size_t m) const {
        std::vector<T> c(samples_);
        for (std::size_t n = 0; n < samples_; ++n) c[n] = (*this)(n, m);
        return c;
    }

    void set_column(std::size_t m, std::span<const T> c) {
        if (c.size() != samples_) throw DimensionMismatch("set_column: length mismatch");
        for (std::size_t n = 0; n < samples_; ++n) (*this)(n, m) = c[n];
    }

    std::span<T> flat() noexcept { return data_; }
    std::span<const T> flat() const noexcept { return data_; }

    bool same_shape(const auto& o) const noexcept {
        return samples_ == o.samples() && channels_ == o.channels();
    }

    friend bool operator==(const Array2D&, const Array2D&) = default;

private:
    std::size_t samples_ = 0;
    std::size_t channels_ = 0;
    std::vector<T> data_;
};

using RealArray = Array2D<double>;
using ComplexArray = Array2D<std::complex<double>>;

}  // namespace jitterlab
