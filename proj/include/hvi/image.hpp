#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hvi {

/// A single image channel, row-major, float32 samples.
using Plane = std::vector<float>;

/// Planar sRGB image. Samples are unit-range reflectance values; use
/// clip_in_place() after arithmetic that may leave [0,1].
struct RgbImage {
    int width = 0;
    int height = 0;
    Plane r, g, b;

    RgbImage() = default;
    RgbImage(int w, int h)
        : width(w), height(h),
          r(pixel_count_checked(w, h), 0.0f),
          g(static_cast<size_t>(w) * h, 0.0f),
          b(static_cast<size_t>(w) * h, 0.0f) {}

    size_t pixels() const { return static_cast<size_t>(width) * height; }

    void clip_in_place();

    /// Throws std::invalid_argument when dimensions or plane sizes are
    /// inconsistent, or any sample is non-finite or outside [0,1].
    void validate() const;

private:
    static size_t pixel_count_checked(int w, int h) {
        if (w < 1 || h < 1)
            throw std::invalid_argument("image dimensions must be >= 1");
        return static_cast<size_t>(w) * h;
    }
};

/// Decoupled hue/saturation/value planes. Hue is stored in turns, [0,1);
/// pixels with zero saturation carry hue 0 as the canonical representative.
struct HsvImage {
    int width = 0;
    int height = 0;
    Plane hue, saturation, value;

    HsvImage() = default;
    HsvImage(int w, int h)
        : width(w), height(h),
          hue(static_cast<size_t>(w) * h, 0.0f),
          saturation(static_cast<size_t>(w) * h, 0.0f),
          value(static_cast<size_t>(w) * h, 0.0f) {
        if (w < 1 || h < 1)
            throw std::invalid_argument("image dimensions must be >= 1");
    }

    size_t pixels() const { return static_cast<size_t>(width) * height; }

    void validate() const;
};

}  // namespace hvi
