#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hvi/image.hpp"
#include "hvi/params.hpp"

namespace hvi {

/// File access or decode/encode failure.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reads an 8- or 16-bit PNG (RGB or RGBA, alpha dropped) or a binary PPM
/// (P6). Samples are normalized by the bit-depth maximum.
RgbImage load_rgb(const std::string& path);

/// Writes an 8-bit RGB PNG; samples are clipped then quantized with
/// round-half-away-from-zero.
void save_rgb(const RgbImage& img, const std::string& path);

/// Writes a min-max normalized 16-bit grayscale PNG plus a
/// "<path>.minmax.txt" sidecar holding the original min and max.
void save_error_map(const std::vector<double>& map, int width, int height,
                    const std::string& path);

struct PaddingRecord {
    int left = 0, right = 0, top = 0, bottom = 0;

    bool empty() const { return left == 0 && right == 0 && top == 0 && bottom == 0; }
};

/// Reflect-pads (edge sample not duplicated) to the next multiple of 8 in
/// each dimension; an odd pad puts the extra pixel on the right/bottom.
/// Dimension-1 axes fall back to edge replication.
std::pair<RgbImage, PaddingRecord> pad_reflect8(const RgbImage& img);

/// Exact inverse of pad_reflect8. Throws when the record does not fit the
/// image.
RgbImage crop_to(const RgbImage& img, const PaddingRecord& record);

/// HVI1 tensor interchange: magic "HVI1", little-endian u32 width, u32
/// height, f32 k, u8 collapse variant, then planar f32 H_hat, V_hat, I.
void write_hvi1(const HviImage& img, const std::string& path);
HviImage read_hvi1(const std::string& path);

}  // namespace hvi
