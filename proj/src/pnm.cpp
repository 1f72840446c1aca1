#include "lwave/pnm.hpp"

#include "lwave/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace lwave::pnm {
namespace {

class HeaderParser {
public:
    explicit HeaderParser(std::span<const std::uint8_t> bytes) : b_(bytes) {}

    std::size_t next_int() {
        skip_space_and_comments();
        std::size_t v = 0;
        std::size_t digits = 0;
        while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
            v = v * 10 + (b_[pos_] - '0');
            if (v > 0xFFFFFFu) throw MalformedHeader("PNM: header value too large");
            ++pos_;
            ++digits;
        }
        if (digits == 0) throw MalformedHeader("PNM: expected an integer in header");
        return v;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void single_space() {
        if (pos_ >= b_.size() || !std::isspace(b_[pos_])) {
            throw MalformedHeader("PNM: missing whitespace after maxval");
        }
        ++pos_;
    }

    std::size_t pos() const { return pos_; }

private:
    void skip_space_and_comments() {
        while (pos_ < b_.size()) {
            if (std::isspace(b_[pos_])) {
                ++pos_;
            } else if (b_[pos_] == '#') {
                while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> b_;
    std::size_t pos_ = 2;
};

} // namespace

ImageU8 read_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw MalformedHeader("PNM: expected P5 or P6 magic");
    }
    ImageU8 img;
    img.channels = bytes[1] == '5' ? 1 : 3;
    HeaderParser hp(bytes);
    img.width = hp.next_int();
    img.height = hp.next_int();
    const std::size_t maxval = hp.next_int();
    if (img.width == 0 || img.height == 0) throw MalformedHeader("PNM: zero dimension");
    if (maxval == 0 || maxval > 65535) throw MalformedHeader("PNM: maxval out of range");
    if (maxval != 255) {
        throw UnsupportedMaxval("PNM: maxval " + std::to_string(maxval) + " (only 255 supported)");
    }
    hp.single_space();
    const std::size_t need = img.width * img.height * img.channels;
    const std::size_t have = bytes.size() - hp.pos();
    if (have < need) {
        throw TruncatedData("PNM: raster has " + std::to_string(have) + " bytes, expected " +
                            std::to_string(need));
    }
    img.samples.assign(bytes.begin() + static_cast<std::ptrdiff_t>(hp.pos()),
                       bytes.begin() + static_cast<std::ptrdiff_t>(hp.pos() + need));
    return img;
}

std::vector<std::uint8_t> write_pnm(const ImageU8& image) {
    if (image.channels != 1 && image.channels != 3) {
        throw InvalidShape("PNM: channels must be 1 or 3");
    }
    if (image.samples.size() != image.width * image.height * image.channels) {
        throw InvalidShape("PNM: sample count does not match dimensions");
    }
    const std::string header = std::string(image.channels == 1 ? "P5" : "P6") + "\n" +
                               std::to_string(image.width) + " " + std::to_string(image.height) +
                               "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.samples.begin(), image.samples.end());
    return out;
}

ImageU8 read_pnm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return read_pnm(bytes);
}

void write_pnm_file(const std::filesystem::path& path, const ImageU8& image) {
    const auto bytes = write_pnm(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Matrix channel_plane(const ImageU8& image, std::size_t c) {
    if (c >= image.channels) throw InvalidShape("PNM: channel index out of range");
    Matrix m(image.height, image.width);
    for (std::size_t i = 0; i < image.width * image.height; ++i) {
        m.data()[i] = image.samples[i * image.channels + c];
    }
    return m;
}

ImageU8 grey_from_plane(const Matrix& plane, double lo, double hi) {
    ImageU8 img{plane.cols(), plane.rows(), 1, std::vector<std::uint8_t>(plane.size())};
    const double range = hi - lo;
    for (std::size_t i = 0; i < plane.size(); ++i) {
        const double t = range > 0.0 ? (plane.data()[i] - lo) / range : 0.0;
        img.samples[i] = static_cast<std::uint8_t>(std::clamp(std::lround(t * 255.0), 0L, 255L));
    }
    return img;
}

} // namespace lwave::pnm
