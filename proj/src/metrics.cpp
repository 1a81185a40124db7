#include "hvi/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "hvi/generalize.hpp"
#include "hvi/parallel.hpp"
#include "hvi/transform.hpp"

namespace hvi {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLumaR = 0.299, kLumaG = 0.587, kLumaB = 0.114;

void require_same_size(const RgbImage& a, const RgbImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("image dimensions differ");
}

// Row partials combined in fixed order, so the result does not depend on
// the worker count.
double sum_rows(int height, const std::function<double(int)>& row_sum) {
    std::vector<double> partial(height, 0.0);
    parallel_for(height, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) partial[y] = row_sum(y);
    });
    return std::accumulate(partial.begin(), partial.end(), 0.0);
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

// 11-tap Gaussian, sigma 1.5, normalized.
const std::array<double, 11>& ssim_window() {
    static const std::array<double, 11> w = [] {
        std::array<double, 11> v{};
        double sum = 0.0;
        for (int i = 0; i < 11; ++i) {
            double d = i - 5;
            v[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
            sum += v[i];
        }
        for (double& x : v) x /= sum;
        return v;
    }();
    return w;
}

// Separable valid-region Gaussian filter; output is (w-10) x (h-10).
std::vector<double> gauss_valid(const std::vector<double>& src, int w, int h) {
    const auto& win = ssim_window();
    int wv = w - 10, hv = h - 10;
    std::vector<double> tmp(static_cast<size_t>(wv) * h);
    parallel_for(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y)
            for (int x = 0; x < wv; ++x) {
                double acc = 0.0;
                for (int j = 0; j < 11; ++j) acc += win[j] * src[static_cast<size_t>(y) * w + x + j];
                tmp[static_cast<size_t>(y) * wv + x] = acc;
            }
    });
    std::vector<double> out(static_cast<size_t>(wv) * hv);
    parallel_for(hv, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y)
            for (int x = 0; x < wv; ++x) {
                double acc = 0.0;
                for (int j = 0; j < 11; ++j) acc += win[j] * tmp[static_cast<size_t>(y + j) * wv + x];
                out[static_cast<size_t>(y) * wv + x] = acc;
            }
    });
    return out;
}

double ssim_channel(const Plane& x, const Plane& y, int w, int h) {
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;
    size_t n = static_cast<size_t>(w) * h;
    std::vector<double> xd(n), yd(n), xx(n), yy(n), xy(n);
    for (size_t i = 0; i < n; ++i) {
        xd[i] = x[i];
        yd[i] = y[i];
        xx[i] = xd[i] * xd[i];
        yy[i] = yd[i] * yd[i];
        xy[i] = xd[i] * yd[i];
    }
    auto mu_x = gauss_valid(xd, w, h);
    auto mu_y = gauss_valid(yd, w, h);
    auto e_xx = gauss_valid(xx, w, h);
    auto e_yy = gauss_valid(yy, w, h);
    auto e_xy = gauss_valid(xy, w, h);
    size_t m = mu_x.size();
    double total = 0.0;
    for (size_t i = 0; i < m; ++i) {
        double mx = mu_x[i], my = mu_y[i];
        double vx = e_xx[i] - mx * mx;
        double vy = e_yy[i] - my * my;
        double cov = e_xy[i] - mx * my;
        total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                 ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
    return total / static_cast<double>(m);
}

}  // namespace

std::string quality_csv_header() {
    return "path_pred,path_ref,psnr_db,ssim,q,gt_mean_applied";
}

std::string quality_csv_row(const std::string& path_pred, const std::string& path_ref,
                            const QualityReport& rep) {
    return csv_field(path_pred) + "," + csv_field(path_ref) + "," + format_double(rep.psnr) +
           "," + format_double(rep.ssim) + "," + format_double(rep.q) + "," +
           (rep.gt_mean_applied ? "1" : "0");
}

double psnr(const RgbImage& pred, const RgbImage& ref) {
    require_same_size(pred, ref);
    int w = pred.width;
    double se = sum_rows(pred.height, [&](int y) {
        double acc = 0.0;
        size_t base = static_cast<size_t>(y) * w;
        for (size_t i = base; i < base + w; ++i) {
            double dr = static_cast<double>(pred.r[i]) - ref.r[i];
            double dg = static_cast<double>(pred.g[i]) - ref.g[i];
            double db = static_cast<double>(pred.b[i]) - ref.b[i];
            acc += dr * dr + dg * dg + db * db;
        }
        return acc;
    });
    double mse = se / (3.0 * pred.pixels());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(mse);
}

double ssim(const RgbImage& pred, const RgbImage& ref) {
    require_same_size(pred, ref);
    if (pred.width < 11 || pred.height < 11)
        throw std::invalid_argument("ssim requires both image sides >= 11");
    double s = ssim_channel(pred.r, ref.r, pred.width, pred.height) +
               ssim_channel(pred.g, ref.g, pred.width, pred.height) +
               ssim_channel(pred.b, ref.b, pred.width, pred.height);
    return s / 3.0;
}

double mean_luma(const RgbImage& img) {
    int w = img.width;
    double total = sum_rows(img.height, [&](int y) {
        double acc = 0.0;
        size_t base = static_cast<size_t>(y) * w;
        for (size_t i = base; i < base + w; ++i)
            acc += kLumaR * img.r[i] + kLumaG * img.g[i] + kLumaB * img.b[i];
        return acc;
    });
    return total / static_cast<double>(img.pixels());
}

RgbImage gt_mean_normalize(const RgbImage& pred, const RgbImage& ref, QualityReport* rep) {
    require_same_size(pred, ref);
    double mp = mean_luma(pred);
    double mr = mean_luma(ref);
    if (!(mr > 0.0))
        throw std::invalid_argument("gt-mean requires a reference with nonzero mean luma");
    double q = mp / mr;
    if (rep) {
        rep->mean_pred = mp;
        rep->mean_ref = mr;
        rep->q = q;
        rep->gt_mean_applied = true;
    }
    RgbImage out(pred.width, pred.height);
    if (!(q > 0.0)) {
        // All-black prediction: no scale can align it; pass it through.
        out = pred;
        return out;
    }
    float inv_q = static_cast<float>(1.0 / q);
    parallel_for(pred.height, [&](int y0, int y1) {
        size_t begin = static_cast<size_t>(y0) * pred.width;
        size_t end = static_cast<size_t>(y1) * pred.width;
        for (size_t i = begin; i < end; ++i) {
            out.r[i] = std::clamp(pred.r[i] * inv_q, 0.0f, 1.0f);
            out.g[i] = std::clamp(pred.g[i] * inv_q, 0.0f, 1.0f);
            out.b[i] = std::clamp(pred.b[i] * inv_q, 0.0f, 1.0f);
        }
    });
    return out;
}

QualityReport measure(const RgbImage& pred, const RgbImage& ref, bool gt_mean) {
    QualityReport rep;
    rep.mean_pred = mean_luma(pred);
    rep.mean_ref = mean_luma(ref);
    rep.q = rep.mean_ref > 0.0 ? rep.mean_pred / rep.mean_ref : 0.0;
    if (gt_mean) {
        RgbImage aligned = gt_mean_normalize(pred, ref, &rep);
        rep.psnr = psnr(aligned, ref);
        rep.ssim = ssim(aligned, ref);
    } else {
        rep.psnr = psnr(pred, ref);
        rep.ssim = ssim(pred, ref);
    }
    return rep;
}

RgbImage correct_value(const RgbImage& lowlight, const RgbImage& ref) {
    require_same_size(lowlight, ref);
    HsvImage low_hsv = rgb_to_hsv(lowlight);
    low_hsv.value = intensity_map(ref);
    return hsv_to_rgb(low_hsv);
}

std::vector<double> error_map(const RgbImage& a, const RgbImage& b, ErrorSpace space,
                              const HviParams& params) {
    require_same_size(a, b);
    size_t n = a.pixels();
    std::vector<double> out(n);
    switch (space) {
        case ErrorSpace::SRGB:
            for (size_t i = 0; i < n; ++i) {
                double dr = static_cast<double>(a.r[i]) - b.r[i];
                double dg = static_cast<double>(a.g[i]) - b.g[i];
                double db = static_cast<double>(a.b[i]) - b.b[i];
                out[i] = std::sqrt(dr * dr + dg * dg + db * db);
            }
            break;
        case ErrorSpace::HSV_HS: {
            HsvImage ha = rgb_to_hsv(a), hb = rgb_to_hsv(b);
            for (size_t i = 0; i < n; ++i)
                out[i] = std::hypot(6.0 * (static_cast<double>(ha.hue[i]) - hb.hue[i]),
                                    static_cast<double>(ha.saturation[i]) - hb.saturation[i]);
            break;
        }
        case ErrorSpace::HVI_HV: {
            HviImage va = rgb_to_hvi(a, params), vb = rgb_to_hvi(b, params);
            for (size_t i = 0; i < n; ++i)
                out[i] = std::hypot(static_cast<double>(va.h_hat[i]) - vb.h_hat[i],
                                    static_cast<double>(va.v_hat[i]) - vb.v_hat[i]);
            break;
        }
    }
    return out;
}

namespace {

// The space's coordinates of an HSV triple: (chroma pair, intensity).
std::vector<Plane> embed_triple(const Plane& hue, const Plane& sat, const Plane& val,
                                int width, int height, AblationSpace space,
                                const HviParams& params) {
    bool polarize = space == AblationSpace::PolOnly || space == AblationSpace::Hvi;
    bool use_ck = space == AblationSpace::CkOnly || space == AblationSpace::Hvi;
    size_t n = static_cast<size_t>(width) * height;
    std::vector<Plane> planes(3, Plane(n));
    parallel_for(height, [&](int y0, int y1) {
        size_t begin = static_cast<size_t>(y0) * width;
        size_t end = static_cast<size_t>(y1) * width;
        for (size_t i = begin; i < end; ++i) {
            double h = hue[i], s = sat[i], v = val[i];
            double p = hue_remap(h * 6.0, params.remap);
            double radius = sat_weight(p, params.sat_fn) * s;
            if (use_ck) radius *= collapse_value(v, params);
            double a, b;
            if (polarize) {
                double theta = kPi / 3.0 * p;
                a = radius * std::cos(theta);
                b = radius * std::sin(theta);
            } else {
                a = radius * h;
                b = radius;
            }
            planes[0][i] = static_cast<float>(a);
            planes[1][i] = static_cast<float>(b);
            planes[2][i] = static_cast<float>(v);
        }
    });
    return planes;
}

double embedded_psnr(const std::vector<Plane>& a, const std::vector<Plane>& b) {
    double se = 0.0;
    size_t n = a[0].size();
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < n; ++i) {
            double d = static_cast<double>(a[c][i]) - b[c][i];
            se += d * d;
        }
    double mse = se / (3.0 * static_cast<double>(n));
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(mse);
}

}  // namespace

double corrected_psnr(const RgbImage& low, const RgbImage& ref, AblationSpace space,
                      const HviParams& params) {
    require_same_size(low, ref);
    params.validate();
    HsvImage low_hsv = rgb_to_hsv(low);
    HsvImage ref_hsv = rgb_to_hsv(ref);
    auto a = embed_triple(low_hsv.hue, low_hsv.saturation, ref_hsv.value, low.width, low.height,
                          space, params);
    auto b = embed_triple(ref_hsv.hue, ref_hsv.saturation, ref_hsv.value, low.width, low.height,
                          space, params);
    return embedded_psnr(a, b);
}

CorrectedPsnr corrected_psnr_all(const RgbImage& low, const RgbImage& ref,
                                 const HviParams& params) {
    require_same_size(low, ref);
    params.validate();
    HsvImage low_hsv = rgb_to_hsv(low);
    HsvImage ref_hsv = rgb_to_hsv(ref);
    CorrectedPsnr out;
    auto eval = [&](AblationSpace space) {
        auto a = embed_triple(low_hsv.hue, low_hsv.saturation, ref_hsv.value, low.width,
                              low.height, space, params);
        auto b = embed_triple(ref_hsv.hue, ref_hsv.saturation, ref_hsv.value, low.width,
                              low.height, space, params);
        return embedded_psnr(a, b);
    };
    out.hsv = eval(AblationSpace::Hsv);
    out.pol_only = eval(AblationSpace::PolOnly);
    out.ck_only = eval(AblationSpace::CkOnly);
    out.hvi = eval(AblationSpace::Hvi);
    return out;
}

std::vector<double> corrected_error_map(const RgbImage& low, const RgbImage& ref,
                                        AblationSpace space, const HviParams& params) {
    require_same_size(low, ref);
    params.validate();
    HsvImage low_hsv = rgb_to_hsv(low);
    HsvImage ref_hsv = rgb_to_hsv(ref);
    auto a = embed_triple(low_hsv.hue, low_hsv.saturation, ref_hsv.value, low.width, low.height,
                          space, params);
    auto b = embed_triple(ref_hsv.hue, ref_hsv.saturation, ref_hsv.value, low.width, low.height,
                          space, params);
    size_t n = low.pixels();
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i) {
        double d0 = static_cast<double>(a[0][i]) - b[0][i];
        double d1 = static_cast<double>(a[1][i]) - b[1][i];
        double d2 = static_cast<double>(a[2][i]) - b[2][i];
        out[i] = std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
    }
    return out;
}

CorrectedPsnr mean_psnr_corrected(const std::vector<std::pair<RgbImage, RgbImage>>& pairs,
                                  const HviParams& space_params) {
    if (pairs.empty())
        throw std::invalid_argument("mean_psnr_corrected requires at least one pair");
    CorrectedPsnr acc{};
    for (const auto& [low, ref] : pairs) {
        CorrectedPsnr one = corrected_psnr_all(low, ref, space_params);
        acc.hsv += one.hsv;
        acc.pol_only += one.pol_only;
        acc.ck_only += one.ck_only;
        acc.hvi += one.hvi;
    }
    double inv = 1.0 / static_cast<double>(pairs.size());
    return {acc.hsv * inv, acc.pol_only * inv, acc.ck_only * inv, acc.hvi * inv};
}

}  // namespace hvi
