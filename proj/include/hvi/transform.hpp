#pragma once

#include <utility>

#include "hvi/image.hpp"
#include "hvi/params.hpp"

namespace hvi {

/// Max-RGB intensity estimate: per pixel max(R,G,B).
Plane intensity_map(const RgbImage& img);

RgbImage hsv_to_rgb(const HsvImage& img);
HsvImage rgb_to_hsv(const RgbImage& img);

/// Scalar collapse function C_k = (F(I)+eps)^(1/k), computed in double.
double collapse_value(double intensity, const HviParams& params);

/// Plane form of collapse_value.
Plane collapse(const Plane& intensity, const HviParams& params);

/// Embeds hue (turns) on the unit circle through the remapped angle
/// theta = (pi/3) * P_gamma(6*hue). Returns (cos theta, sin theta) planes.
std::pair<Plane, Plane> polarize_hue(const Plane& hue, const HviParams& params);

/// Forward transform: H_hat = C_k * D_T * S * cos(theta),
/// V_hat = C_k * D_T * S * sin(theta), intensity = max(R,G,B).
HviImage rgb_to_hvi(const RgbImage& img, const HviParams& params);

/// Perceptual inverse. Recovers hue with the two-argument arctangent,
/// undoes the remap, scales saturation by alpha_s and brightness by
/// alpha_i, clamps both to [0,1]. Expects input already inside the clip
/// domain (see clip_to_domain).
RgbImage hvi_to_rgb(const HviImage& img, const HviParams& params);

/// Clamps intensity to [0,1] and radially rescales chroma vectors that
/// exceed the domain radius (F(I)+eps)^(1/k); direction is preserved and
/// the operation is idempotent.
HviImage clip_to_domain(const HviImage& img);

}  // namespace hvi
