#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hvi/image.hpp"

namespace hvi {

/// Piecewise-linear remap of the hue axis, parameterized by the positions
/// the green and blue anchors are moved to. gamma_g = 2, gamma_b = 4 is the
/// identity fold.
struct HueRemap {
    double gamma_g = 2.0;
    double gamma_b = 4.0;

    bool is_identity() const { return gamma_g == 2.0 && gamma_b == 4.0; }
    void validate() const;  // requires 0 < gamma_g < gamma_b < 6
};

/// Evaluates the remap at h6 in [0,6]. Continuous, strictly increasing,
/// fixes 0 and 6, sends 2 -> gamma_g and 4 -> gamma_b.
double hue_remap(double h6, const HueRemap& remap);

/// Inverse of hue_remap on [0,6].
double hue_remap_inverse(double p, const HueRemap& remap);

/// Hue-dependent saturation weight. Unit is the uniformly sensitive space;
/// Parabolic (-4x(x-1)) suppresses red-adjacent colors; Custom is a
/// 257-entry table over [0,1], linearly interpolated.
struct SatFn {
    enum class Kind : uint8_t { Unit, Parabolic, Custom };

    Kind kind = Kind::Unit;
    std::vector<double> table;  // 257 entries when kind == Custom

    bool is_unit() const { return kind == Kind::Unit; }
    void validate() const;

    static SatFn unit() { return {}; }
    static SatFn parabolic() { return {Kind::Parabolic, {}}; }
    static SatFn custom(std::vector<double> table);

    /// Loads a Custom table from a plain-text file of 257 whitespace-
    /// separated decimal values.
    static SatFn from_file(const std::string& path);
};

/// D_T: evaluates fn at h6/6, where h6 is the already-remapped hue.
double sat_weight(double h6, const SatFn& fn);

/// Elementwise img^gamma, clipped to [0,1].
RgbImage gamma_adjust(const RgbImage& img, double gamma);

/// Draws one gamma ~ U[0.6, 1.2] from a generator seeded with `seed` and
/// applies it to the whole image. Deterministic given the seed.
RgbImage random_gamma_augment(const RgbImage& img, uint64_t seed);

}  // namespace hvi
