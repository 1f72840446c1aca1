#pragma once

// Little-endian byte streams for the parameter and checkpoint formats.

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace lwave {

class ByteWriter {
public:
    void put_magic(std::string_view magic);
    void put_u32(std::uint32_t v);
    void put_u64(std::uint64_t v);
    void put_f64(double v);
    void put_bytes(std::span<const std::uint8_t> bytes);

    const std::vector<std::uint8_t>& bytes() const noexcept { return buf_; }
    std::vector<std::uint8_t> take() noexcept { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

/// Throws TruncatedData when reading past the end and MalformedHeader on a
/// magic mismatch.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : data_(bytes) {}

    void expect_magic(std::string_view magic);
    std::uint32_t get_u32();
    std::uint64_t get_u64();
    double get_f64();
    std::span<const std::uint8_t> get_bytes(std::size_t n);

    std::size_t remaining() const noexcept { return data_.size() - pos_; }

private:
    void need(std::size_t n) const;

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace lwave
