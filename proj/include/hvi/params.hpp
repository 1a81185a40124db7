#pragma once

#include <cstdint>

#include "hvi/generalize.hpp"
#include "hvi/image.hpp"

namespace hvi {

/// The F inside the collapse function: sin(pi*I/2), I, or log2(I+1).
enum class CollapseVariant : uint8_t { Sin = 0, Linear = 1, Log = 2 };

/// Parameters of the forward/inverse transforms. Defaults give the
/// plain color space: k = 1, sinusoidal collapse, identity hue remap,
/// unit saturation weight, unit output scaling.
struct HviParams {
    double k = 1.0;                  // darkness density, > 0
    double epsilon = 1e-8;           // guard inside the root and in inverse denominators
    CollapseVariant variant = CollapseVariant::Sin;
    HueRemap remap;                  // gamma_g, gamma_b
    SatFn sat_fn;                    // D_T source
    double alpha_s = 1.0;            // inverse-side saturation gain
    double alpha_i = 1.0;            // inverse-side brightness gain

    void validate() const;
};

/// Polarized, intensity-collapsed chroma planes plus the intensity axis.
/// Valid points satisfy h_hat^2 + v_hat^2 <= (F(I)+eps)^(2/k); params is a
/// snapshot of the transform that produced the image.
struct HviImage {
    int width = 0;
    int height = 0;
    Plane h_hat, v_hat, intensity;
    HviParams params;

    HviImage() = default;
    HviImage(int w, int h, HviParams p = {})
        : width(w), height(h),
          h_hat(static_cast<size_t>(w) * h, 0.0f),
          v_hat(static_cast<size_t>(w) * h, 0.0f),
          intensity(static_cast<size_t>(w) * h, 0.0f),
          params(p) {
        if (w < 1 || h < 1)
            throw std::invalid_argument("image dimensions must be >= 1");
    }

    size_t pixels() const { return static_cast<size_t>(width) * height; }

    /// Largest amount by which any pixel's chroma radius exceeds the
    /// domain bound (0 when the whole image is inside the clip domain).
    double max_domain_excess() const;
};

}  // namespace hvi
