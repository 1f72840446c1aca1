#include "lwave/binary_io.hpp"

#include "lwave/error.hpp"

#include <bit>
#include <string>

namespace lwave {

void ByteWriter::put_magic(std::string_view magic) {
    for (char c : magic) buf_.push_back(static_cast<std::uint8_t>(c));
}

void ByteWriter::put_u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::put_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::put_bytes(std::span<const std::uint8_t> bytes) {
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

void ByteReader::need(std::size_t n) const {
    if (remaining() < n) {
        throw TruncatedData("binary stream: need " + std::to_string(n) + " bytes at offset " +
                            std::to_string(pos_) + ", only " + std::to_string(remaining()) +
                            " left");
    }
}

void ByteReader::expect_magic(std::string_view magic) {
    need(magic.size());
    for (std::size_t i = 0; i < magic.size(); ++i) {
        if (data_[pos_ + i] != static_cast<std::uint8_t>(magic[i])) {
            throw MalformedHeader("binary stream: expected magic '" + std::string(magic) + "'");
        }
    }
    pos_ += magic.size();
}

std::uint32_t ByteReader::get_u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
}

std::uint64_t ByteReader::get_u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
}

double ByteReader::get_f64() { return std::bit_cast<double>(get_u64()); }

std::span<const std::uint8_t> ByteReader::get_bytes(std::size_t n) {
    need(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

} // namespace lwave
