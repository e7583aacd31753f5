#include "rdmf/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "rdmf/error.hpp"

namespace rdmf {

namespace {

[[noreturn]] void parse_fail(const std::string& what, std::size_t offset) {
    throw ParseError(what + " at byte offset " + std::to_string(offset));
}

bool is_pgm_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Whitespace and '#' comments are interchangeable separators in the header
// (and between P2 samples).
void skip_separators(const std::string& buf, std::size_t& pos) {
    while (pos < buf.size()) {
        if (is_pgm_space(buf[pos])) {
            ++pos;
        } else if (buf[pos] == '#') {
            while (pos < buf.size() && buf[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
}

long parse_number(const std::string& buf, std::size_t& pos, const std::string& what) {
    skip_separators(buf, pos);
    const std::size_t start = pos;
    long value = 0;
    while (pos < buf.size() && buf[pos] >= '0' && buf[pos] <= '9') {
        value = value * 10 + (buf[pos] - '0');
        if (value > 1000000000L) parse_fail("oversized " + what, start);
        ++pos;
    }
    if (pos == start) parse_fail("expected " + what, start);
    return value;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw DataError("read failure on " + path);
    return std::move(ss).str();
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
    const std::string buf = read_file(path);
    if (buf.size() < 2 || buf[0] != 'P' || (buf[1] != '5' && buf[1] != '2'))
        parse_fail("not a P5/P2 PGM header", 0);
    const bool binary = buf[1] == '5';
    std::size_t pos = 2;

    const long width = parse_number(buf, pos, "width");
    const long height = parse_number(buf, pos, "height");
    if (width <= 0 || height <= 0 || width > 1000000 || height > 1000000)
        parse_fail("unusable image dimensions", 2);
    const std::size_t maxval_at = [&] {
        std::size_t probe = pos;
        skip_separators(buf, probe);
        return probe;
    }();
    const long maxval = parse_number(buf, pos, "maxval");
    if (maxval != 255) parse_fail("unsupported maxval " + std::to_string(maxval), maxval_at);

    GrayImage img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    img.pixels.resize(count);

    if (binary) {
        if (pos >= buf.size() || !is_pgm_space(buf[pos]))
            parse_fail("expected single whitespace before pixel data", pos);
        ++pos;
        if (buf.size() - pos < count) parse_fail("truncated pixel data", buf.size());
        for (std::size_t i = 0; i < count; ++i)
            img.pixels[i] = static_cast<unsigned char>(buf[pos + i]) / 255.0;
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            skip_separators(buf, pos);
            if (pos >= buf.size()) parse_fail("truncated pixel data", buf.size());
            const std::size_t sample_at = pos;
            const long sample = parse_number(buf, pos, "pixel sample");
            if (sample > 255) parse_fail("pixel sample exceeds maxval", sample_at);
            img.pixels[i] = static_cast<double>(sample) / 255.0;
        }
    }
    return img;
}

void write_pgm(const GrayImage& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0)
        throw DataError("cannot write image with non-positive dimensions");
    const std::size_t count =
        static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    if (img.pixels.size() != count)
        throw DataError("pixel buffer size does not match image dimensions");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<char> bytes(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double p = img.pixels[i];
        if (!std::isfinite(p)) throw DataError("non-finite pixel at index " + std::to_string(i));
        const double clamped = std::min(1.0, std::max(0.0, p));
        bytes[i] = static_cast<char>(static_cast<unsigned char>(std::llround(clamped * 255.0)));
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failure on " + path);
}

DenseMatrix image_to_matrix(const GrayImage& img) {
    DenseMatrix m(img.height, img.width);
    for (int i = 0; i < img.height; ++i)
        for (int j = 0; j < img.width; ++j) m(i, j) = img.at(i, j);
    return m;
}

GrayImage image_from_matrix(const DenseMatrix& m) {
    GrayImage img;
    img.height = m.rows();
    img.width = m.cols();
    img.pixels.resize(static_cast<std::size_t>(m.size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) img.at(i, j) = std::min(1.0, std::max(0.0, m(i, j)));
    return img;
}

void write_mask_pgm(const MaskMatrix& mask, const std::string& path) {
    GrayImage img;
    img.height = mask.rows();
    img.width = mask.cols();
    img.pixels.resize(static_cast<std::size_t>(mask.omega.size()));
    for (int i = 0; i < mask.rows(); ++i)
        for (int j = 0; j < mask.cols(); ++j) img.at(i, j) = mask.omega(i, j);
    write_pgm(img, path);
}

MaskMatrix read_mask_pgm(const std::string& path) {
    const GrayImage img = read_pgm(path);
    DenseMatrix omega(img.height, img.width);
    for (int i = 0; i < img.height; ++i) {
        for (int j = 0; j < img.width; ++j) {
            const double p = img.at(i, j);
            if (p == 0.0) {
                omega(i, j) = 0.0;
            } else if (p == 1.0) {
                omega(i, j) = 1.0;
            } else {
                throw DataError("mask pixel at (" + std::to_string(i) + "," + std::to_string(j) +
                                ") is neither 0 nor 255");
            }
        }
    }
    return MaskMatrix::from_matrix(std::move(omega));
}

}  // namespace rdmf
