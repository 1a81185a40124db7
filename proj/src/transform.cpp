#include "hvi/transform.hpp"

#include <algorithm>
#include <cmath>

#include "hvi/parallel.hpp"

namespace hvi {

namespace {

constexpr double kPi = 3.14159265358979323846;

// The per-pixel kernels below are branch-free single-precision code with
// no libm calls on the default path, so the compiler can vectorize the
// plane loops. Polynomial kernels are the classic Cephes single-precision
// sin/cos minimax sets (under 1 ulp on the reduced range).

inline float sin_poly(float x) {  // |x| <= pi/4
    float z = x * x;
    return x + x * z * (-1.6666654611e-1f +
                        z * (8.3321608736e-3f + z * -1.9515295891e-4f));
}

inline float cos_poly(float x) {  // |x| <= pi/4
    float z = x * x;
    return 1.0f - 0.5f * z +
           z * z * (4.166664568298827e-2f +
                    z * (-1.388731625493765e-3f + z * 2.443315711809948e-5f));
}

// sin/cos of theta in [0, 2pi], quadrant-reduced in double.
inline void fast_sincos(double theta, float& s, float& c) {
    int q = static_cast<int>(theta * (2.0 / kPi) + 0.5);
    float x = static_cast<float>(theta - q * (kPi / 2.0));
    float sp = sin_poly(x);
    float cp = cos_poly(x);
    int qm = q & 3;
    s = qm == 0 ? sp : qm == 1 ? cp : qm == 2 ? -sp : -cp;
    c = qm == 0 ? cp : qm == 1 ? -sp : qm == 2 ? -cp : sp;
}

// sin(pi/2 * u) for u in [0,1] (clamped), by folding onto [0, pi/4].
inline float sin_half_turn(float u) {
    u = std::clamp(u, 0.0f, 1.0f);
    bool hi = u > 0.5f;
    float w = hi ? 1.0f - u : u;
    float x = static_cast<float>(kPi / 2.0) * w;
    return hi ? cos_poly(x) : sin_poly(x);
}

// Branch-light two-argument arctangent. Minimax polynomial on [0,1];
// worst deviation from libm is ~1.7e-6 rad at the octant diagonal, an
// order of magnitude inside the round-trip budget. Matches atan2's
// conventions at the origin and on the negative x axis up to sign of
// zero, which the caller's wrap to [0, 2pi) absorbs.
inline float fast_atan2(float y, float x) {
    float ax = std::fabs(x), ay = std::fabs(y);
    float mx = std::max(ax, ay), mn = std::min(ax, ay);
    float t = mx > 0.0f ? mn / mx : 0.0f;
    float z = t * t;
    float p = t * (0.99997726f +
                   z * (-0.33262347f +
                        z * (0.19354346f +
                             z * (-0.11643287f + z * (0.05265332f + z * -0.01172120f)))));
    if (ay > ax) p = 1.57079637f - p;
    if (x < 0.0f) p = 3.14159274f - p;
    return y < 0.0f ? -p : p;
}

// Single-precision collapse used by the plane kernels. The forward and
// inverse transforms must evaluate C_k through the same code path so the
// multiply/divide pair cancels exactly.
struct CollapseKernel {
    CollapseVariant variant;
    float eps;
    float inv_k;
    bool unit_root;

    explicit CollapseKernel(const HviParams& p)
        : variant(p.variant),
          eps(static_cast<float>(p.epsilon)),
          inv_k(static_cast<float>(1.0 / p.k)),
          unit_root(p.k == 1.0) {}

    float operator()(float i) const {
        float f = 0.0f;
        switch (variant) {
            case CollapseVariant::Sin:
                f = sin_half_turn(i);
                break;
            case CollapseVariant::Linear:
                f = std::clamp(i, 0.0f, 1.0f);
                break;
            case CollapseVariant::Log:
                f = std::log2(std::clamp(i, 0.0f, 1.0f) + 1.0f);
                break;
        }
        float base = f + eps;
        return unit_root ? base : std::pow(base, inv_k);
    }
};

// Decomposes one pixel; h6 is the hue sextant value in [0,6), 0 on the
// gray axis. Gray pixels divide by 1 instead of delta so every lane stays
// finite and the body is branch-free.
inline void rgb_to_hsv_px(float r, float g, float b, float& h6, float& s, float& v) {
    float mx = std::max(r, std::max(g, b));
    float mn = std::min(r, std::min(g, b));
    float delta = mx - mn;
    v = mx;
    bool chroma = delta > 0.0f && mx > 0.0f;
    s = chroma ? delta / mx : 0.0f;
    bool r_max = r >= g && r >= b;
    bool g_max = g >= b;
    float num = r_max ? g - b : g_max ? b - r : r - g;
    float off = r_max ? 0.0f : g_max ? 2.0f : 4.0f;
    float h = num / (chroma ? delta : 1.0f) + off;
    h = h < 0.0f ? h + 6.0f : h;
    h6 = (chroma && h < 6.0f) ? h : 0.0f;
}

// One output channel of the hue wheel: offset 5 gives R, 3 gives G,
// 1 gives B.
inline float hsv_channel(float offset, float h6, float s, float v) {
    float k = offset + h6;
    k = k >= 6.0f ? k - 6.0f : k;
    float w = std::max(0.0f, std::min(std::min(k, 4.0f - k), 1.0f));
    return v - v * s * w;
}

inline void hsv_to_rgb_px(float h_turns, float s, float v, float& r, float& g, float& b) {
    float h6 = h_turns * 6.0f;
    r = hsv_channel(5.0f, h6, s, v);
    g = hsv_channel(3.0f, h6, s, v);
    b = hsv_channel(1.0f, h6, s, v);
}

inline float clamp_unit(float x) {
    return std::clamp(x, 0.0f, 1.0f);
}

}  // namespace

void RgbImage::clip_in_place() {
    for (Plane* plane : {&r, &g, &b})
        for (float& x : *plane) x = std::clamp(x, 0.0f, 1.0f);
}

void RgbImage::validate() const {
    if (width < 1 || height < 1)
        throw std::invalid_argument("image dimensions must be >= 1");
    size_t n = pixels();
    if (r.size() != n || g.size() != n || b.size() != n)
        throw std::invalid_argument("plane size does not match dimensions");
    for (const Plane* plane : {&r, &g, &b})
        for (float x : *plane)
            if (!(x >= 0.0f && x <= 1.0f))
                throw std::invalid_argument("sample outside [0,1]");
}

void HsvImage::validate() const {
    if (width < 1 || height < 1)
        throw std::invalid_argument("image dimensions must be >= 1");
    size_t n = pixels();
    if (hue.size() != n || saturation.size() != n || value.size() != n)
        throw std::invalid_argument("plane size does not match dimensions");
    for (size_t i = 0; i < n; ++i) {
        if (!(hue[i] >= 0.0f && hue[i] < 1.0f))
            throw std::invalid_argument("hue outside [0,1)");
        if (!(saturation[i] >= 0.0f && saturation[i] <= 1.0f))
            throw std::invalid_argument("saturation outside [0,1]");
        if (!(value[i] >= 0.0f && value[i] <= 1.0f))
            throw std::invalid_argument("value outside [0,1]");
        if (saturation[i] == 0.0f && hue[i] != 0.0f)
            throw std::invalid_argument("zero-saturation pixel must carry hue 0");
    }
}

void HviParams::validate() const {
    if (!(k > 0.0) || !std::isfinite(k))
        throw std::invalid_argument("k must be positive");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("epsilon must be positive");
    remap.validate();
    sat_fn.validate();
    if (!(alpha_s >= 0.0) || !std::isfinite(alpha_s))
        throw std::invalid_argument("alpha_s must be >= 0");
    if (!(alpha_i >= 0.0) || !std::isfinite(alpha_i))
        throw std::invalid_argument("alpha_i must be >= 0");
}

double HviImage::max_domain_excess() const {
    double excess = 0.0;
    size_t n = pixels();
    for (size_t i = 0; i < n; ++i) {
        double ii = intensity[i];
        if (ii < 0.0) excess = std::max(excess, -ii);
        if (ii > 1.0) excess = std::max(excess, ii - 1.0);
        double r_max = collapse_value(std::clamp(ii, 0.0, 1.0), params);
        double r = std::hypot(static_cast<double>(h_hat[i]), static_cast<double>(v_hat[i]));
        excess = std::max(excess, r - r_max);
    }
    return excess;
}

Plane intensity_map(const RgbImage& img) {
    Plane out(img.pixels());
    parallel_for(img.height, [&](int y0, int y1) {
        size_t begin = static_cast<size_t>(y0) * img.width;
        size_t end = static_cast<size_t>(y1) * img.width;
        for (size_t i = begin; i < end; ++i)
            out[i] = std::max(img.r[i], std::max(img.g[i], img.b[i]));
    });
    return out;
}

HsvImage rgb_to_hsv(const RgbImage& img) {
    HsvImage out(img.width, img.height);
    parallel_for(img.height, [&](int y0, int y1) {
        size_t begin = static_cast<size_t>(y0) * img.width;
        size_t end = static_cast<size_t>(y1) * img.width;
        for (size_t i = begin; i < end; ++i) {
            float h6, s, v;
            rgb_to_hsv_px(img.r[i], img.g[i], img.b[i], h6, s, v);
            float hf = h6 / 6.0f;
            out.hue[i] = hf >= 1.0f ? 0.0f : hf;
            out.saturation[i] = s;
            out.value[i] = v;
        }
    });
    return out;
}

RgbImage hsv_to_rgb(const HsvImage& img) {
    RgbImage out(img.width, img.height);
    parallel_for(img.height, [&](int y0, int y1) {
        size_t begin = static_cast<size_t>(y0) * img.width;
        size_t end = static_cast<size_t>(y1) * img.width;
        for (size_t i = begin; i < end; ++i) {
            float r, g, b;
            hsv_to_rgb_px(img.hue[i], img.saturation[i], img.value[i], r, g, b);
            out.r[i] = clamp_unit(r);
            out.g[i] = clamp_unit(g);
            out.b[i] = clamp_unit(b);
        }
    });
    return out;
}

double collapse_value(double intensity, const HviParams& params) {
    double f = 0.0;
    switch (params.variant) {
        case CollapseVariant::Sin:
            f = std::sin(kPi * 0.5 * intensity);
            break;
        case CollapseVariant::Linear:
            f = intensity;
            break;
        case CollapseVariant::Log:
            f = std::log2(intensity + 1.0);
            break;
    }
    double base = f + params.epsilon;
    return params.k == 1.0 ? base : std::pow(base, 1.0 / params.k);
}

Plane collapse(const Plane& intensity, const HviParams& params) {
    params.validate();
    CollapseKernel ck(params);
    Plane out(intensity.size());
    for (size_t i = 0; i < intensity.size(); ++i) out[i] = ck(intensity[i]);
    return out;
}

std::pair<Plane, Plane> polarize_hue(const Plane& hue, const HviParams& params) {
    params.validate();
    Plane h_unit(hue.size()), v_unit(hue.size());
    for (size_t i = 0; i < hue.size(); ++i) {
        double p = hue_remap(hue[i] * 6.0, params.remap);
        float su, cu;
        fast_sincos(kPi / 3.0 * p, su, cu);
        h_unit[i] = cu;
        v_unit[i] = su;
    }
    return {std::move(h_unit), std::move(v_unit)};
}

HviImage rgb_to_hvi(const RgbImage& img, const HviParams& params) {
    params.validate();
    HviImage out(img.width, img.height, params);
    CollapseKernel ck(params);
    // The identity remap and unit weight are exact no-ops; skipping them
    // keeps the common path free of per-pixel calls.
    const bool remap_hue = !params.remap.is_identity();
    const bool weigh_sat = !params.sat_fn.is_unit();
    parallel_for(img.height, [&](int y0, int y1) {
        size_t begin = static_cast<size_t>(y0) * img.width;
        size_t end = static_cast<size_t>(y1) * img.width;
        for (size_t i = begin; i < end; ++i) {
            float h6, s, v;
            rgb_to_hsv_px(img.r[i], img.g[i], img.b[i], h6, s, v);
            double p = h6;
            if (remap_hue) p = hue_remap(p, params.remap);
            if (weigh_sat) s = static_cast<float>(s * sat_weight(p, params.sat_fn));
            float su, cu;
            fast_sincos(kPi / 3.0 * p, su, cu);
            float radius = s * ck(v);
            out.h_hat[i] = radius * cu;
            out.v_hat[i] = radius * su;
            out.intensity[i] = v;
        }
    });
    return out;
}

RgbImage hvi_to_rgb(const HviImage& img, const HviParams& params) {
    params.validate();
    RgbImage out(img.width, img.height);
    CollapseKernel ck(params);
    float eps = static_cast<float>(params.epsilon);
    const bool remap_hue = !params.remap.is_identity();
    const bool weigh_sat = !params.sat_fn.is_unit();
    parallel_for(img.height, [&](int y0, int y1) {
        size_t begin = static_cast<size_t>(y0) * img.width;
        size_t end = static_cast<size_t>(y1) * img.width;
        const float alpha_s = static_cast<float>(params.alpha_s);
        const float alpha_i = static_cast<float>(params.alpha_i);
        for (size_t i = begin; i < end; ++i) {
            float ii = std::clamp(img.intensity[i], 0.0f, 1.0f);
            float denom = ck(ii) + eps;
            float hn = img.h_hat[i] / denom;
            float vn = img.v_hat[i] / denom;
            float theta = fast_atan2(vn, hn);
            if (theta < 0.0f) theta += static_cast<float>(2.0 * kPi);
            float p = std::clamp(theta * static_cast<float>(3.0 / kPi), 0.0f, 6.0f);
            float turns;
            if (remap_hue) {
                turns = static_cast<float>(hue_remap_inverse(p, params.remap) * (1.0 / 6.0));
            } else {
                turns = p * (1.0f / 6.0f);
            }
            if (turns >= 1.0f) turns -= 1.0f;
            float radius = std::sqrt(hn * hn + vn * vn);
            float s;
            if (weigh_sat) {
                float w = static_cast<float>(sat_weight(p, params.sat_fn));
                s = w < 1e-6f ? 0.0f : std::clamp(alpha_s * radius / w, 0.0f, 1.0f);
            } else {
                s = std::clamp(alpha_s * radius, 0.0f, 1.0f);
            }
            float v = std::clamp(alpha_i * ii, 0.0f, 1.0f);
            float r, g, b;
            hsv_to_rgb_px(turns, s, v, r, g, b);
            out.r[i] = clamp_unit(r);
            out.g[i] = clamp_unit(g);
            out.b[i] = clamp_unit(b);
        }
    });
    return out;
}

HviImage clip_to_domain(const HviImage& img) {
    img.params.validate();
    HviImage out(img.width, img.height, img.params);
    size_t n = img.pixels();
    for (size_t i = 0; i < n; ++i) {
        double ii = std::clamp(static_cast<double>(img.intensity[i]), 0.0, 1.0);
        double r_max = collapse_value(ii, img.params);
        double h = img.h_hat[i];
        double v = img.v_hat[i];
        double r = std::hypot(h, v);
        // Rescale only beyond a small relative margin so a second
        // application is a bitwise no-op.
        if (r > r_max * (1.0 + 1e-6)) {
            double scale = r_max / r;
            h *= scale;
            v *= scale;
        }
        out.h_hat[i] = static_cast<float>(h);
        out.v_hat[i] = static_cast<float>(v);
        out.intensity[i] = static_cast<float>(ii);
    }
    return out;
}

}  // namespace hvi
