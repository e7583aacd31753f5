#ifndef RDMF_IMAGE_IO_HPP
#define RDMF_IMAGE_IO_HPP

#include <string>
#include <vector>

#include "rdmf/dense_matrix.hpp"
#include "rdmf/objective.hpp"

namespace rdmf {

// Grayscale image, pixels in [0,1], row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    double& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
    double at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
};

// PGM codec, P5 (binary) and P2 (ASCII), maxval 255 only. Pixels map to
// raw/255.0 on read and round(clamp(p,0,1)*255) on write, so a write/read
// round trip preserves every 8-bit value. Parse failures report the byte
// offset. Reading throws ParseError, I/O failures throw DataError.
GrayImage read_pgm(const std::string& path);
void write_pgm(const GrayImage& img, const std::string& path);

// height x width matrix view of the image and back. from_matrix clamps
// into [0,1].
DenseMatrix image_to_matrix(const GrayImage& img);
GrayImage image_from_matrix(const DenseMatrix& m);

// Mask persisted as a PGM: byte 0 = missing, 255 = observed. Any other
// pixel value on read is a DataError.
void write_mask_pgm(const MaskMatrix& mask, const std::string& path);
MaskMatrix read_mask_pgm(const std::string& path);

}  // namespace rdmf

#endif
