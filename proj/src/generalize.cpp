#include "hvi/generalize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "hvi/parallel.hpp"

namespace hvi {

void HueRemap::validate() const {
    if (!(gamma_g > 0.0) || !(gamma_b > gamma_g) || !(gamma_b < 6.0))
        throw std::invalid_argument("hue remap requires 0 < gamma_g < gamma_b < 6");
}

double hue_remap(double h6, const HueRemap& remap) {
    if (!(h6 >= 0.0 && h6 <= 6.0))
        throw std::invalid_argument("hue_remap input outside [0,6]");
    if (h6 < 2.0)
        return 0.5 * remap.gamma_g * h6;
    if (h6 < 4.0)
        return 0.5 * (remap.gamma_b - remap.gamma_g) * (h6 - 2.0) + remap.gamma_g;
    return 0.5 * (6.0 - remap.gamma_b) * (h6 - 6.0) + 6.0;
}

double hue_remap_inverse(double p, const HueRemap& remap) {
    if (!(p >= 0.0 && p <= 6.0))
        throw std::invalid_argument("hue_remap_inverse input outside [0,6]");
    if (p < remap.gamma_g)
        return 2.0 * p / remap.gamma_g;
    if (p < remap.gamma_b)
        return 2.0 + 2.0 * (p - remap.gamma_g) / (remap.gamma_b - remap.gamma_g);
    return 6.0 + 2.0 * (p - 6.0) / (6.0 - remap.gamma_b);
}

SatFn SatFn::custom(std::vector<double> table) {
    SatFn fn{Kind::Custom, std::move(table)};
    fn.validate();
    return fn;
}

void SatFn::validate() const {
    if (kind != Kind::Custom) return;
    if (table.size() != 257)
        throw std::invalid_argument("custom saturation table must have 257 entries");
    for (double v : table) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("custom saturation table entries must be finite and >= 0");
    }
    if (std::abs(table.front() - table.back()) > 1e-9)
        throw std::invalid_argument("custom saturation table must satisfy f(0) = f(1)");
}

SatFn SatFn::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open saturation table: " + path);
    std::vector<double> table;
    table.reserve(257);
    double v;
    while (in >> v) table.push_back(v);
    if (!in.eof())
        throw std::invalid_argument("non-numeric data in saturation table: " + path);
    if (table.size() != 257)
        throw std::invalid_argument("saturation table must hold 257 values: " + path);
    return custom(std::move(table));
}

double sat_weight(double h6, const SatFn& fn) {
    switch (fn.kind) {
        case SatFn::Kind::Unit:
            return 1.0;
        case SatFn::Kind::Parabolic: {
            double x = h6 / 6.0;
            return -4.0 * x * (x - 1.0);
        }
        case SatFn::Kind::Custom: {
            double x = std::clamp(h6 / 6.0, 0.0, 1.0) * 256.0;
            int i = std::min(static_cast<int>(x), 255);
            double f = x - i;
            return fn.table[i] * (1.0 - f) + fn.table[i + 1] * f;
        }
    }
    return 1.0;
}

RgbImage gamma_adjust(const RgbImage& img, double gamma) {
    img.validate();
    RgbImage out(img.width, img.height);
    parallel_for(img.height, [&](int y0, int y1) {
        size_t begin = static_cast<size_t>(y0) * img.width;
        size_t end = static_cast<size_t>(y1) * img.width;
        for (size_t i = begin; i < end; ++i) {
            out.r[i] = std::clamp(static_cast<float>(std::pow(img.r[i], gamma)), 0.0f, 1.0f);
            out.g[i] = std::clamp(static_cast<float>(std::pow(img.g[i], gamma)), 0.0f, 1.0f);
            out.b[i] = std::clamp(static_cast<float>(std::pow(img.b[i], gamma)), 0.0f, 1.0f);
        }
    });
    return out;
}

RgbImage random_gamma_augment(const RgbImage& img, uint64_t seed) {
    std::mt19937_64 rng(seed);
    // Fixed 53-bit mapping to [0,1) so the draw does not depend on the
    // standard library's distribution implementation.
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double gamma = 0.6 + 0.6 * u;
    return gamma_adjust(img, gamma);
}

}  // namespace hvi
