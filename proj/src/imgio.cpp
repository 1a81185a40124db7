#include "hvi/imgio.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace hvi {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw io_error("cannot open " + path);
    return f;
}

void put_u32le(std::FILE* f, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    if (std::fwrite(b, 1, 4, f) != 4) throw io_error("write failed");
}

uint32_t get_u32le(std::FILE* f) {
    unsigned char b[4];
    if (std::fread(b, 1, 4, f) != 4) throw io_error("unexpected end of file");
    return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 |
           static_cast<uint32_t>(b[2]) << 16 | static_cast<uint32_t>(b[3]) << 24;
}

void put_f32le(std::FILE* f, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32le(f, bits);
}

float get_f32le(std::FILE* f) {
    uint32_t bits = get_u32le(f);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

void write_plane_f32le(std::FILE* f, const Plane& plane) {
    std::vector<unsigned char> buf(plane.size() * 4);
    for (size_t i = 0; i < plane.size(); ++i) {
        uint32_t bits;
        std::memcpy(&bits, &plane[i], 4);
        buf[i * 4 + 0] = static_cast<unsigned char>(bits);
        buf[i * 4 + 1] = static_cast<unsigned char>(bits >> 8);
        buf[i * 4 + 2] = static_cast<unsigned char>(bits >> 16);
        buf[i * 4 + 3] = static_cast<unsigned char>(bits >> 24);
    }
    if (std::fwrite(buf.data(), 1, buf.size(), f) != buf.size()) throw io_error("write failed");
}

void read_plane_f32le(std::FILE* f, Plane& plane) {
    std::vector<unsigned char> buf(plane.size() * 4);
    if (std::fread(buf.data(), 1, buf.size(), f) != buf.size())
        throw io_error("unexpected end of file");
    for (size_t i = 0; i < plane.size(); ++i) {
        uint32_t bits = static_cast<uint32_t>(buf[i * 4 + 0]) |
                        static_cast<uint32_t>(buf[i * 4 + 1]) << 8 |
                        static_cast<uint32_t>(buf[i * 4 + 2]) << 16 |
                        static_cast<uint32_t>(buf[i * 4 + 3]) << 24;
        std::memcpy(&plane[i], &bits, 4);
    }
}

int skip_ppm_space(std::FILE* f) {
    int c = std::fgetc(f);
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = std::fgetc(f);
        } else if (!std::isspace(c)) {
            break;
        }
        c = std::fgetc(f);
    }
    return c;
}

long read_ppm_int(std::FILE* f) {
    int c = skip_ppm_space(f);
    if (c == EOF || !std::isdigit(c)) throw io_error("malformed PPM header");
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        if (v > 1 << 30) throw io_error("malformed PPM header");
        c = std::fgetc(f);
    }
    std::ungetc(c, f);
    return v;
}

RgbImage load_ppm(std::FILE* f, const std::string& path) {
    char magic[2];
    if (std::fread(magic, 1, 2, f) != 2 || magic[0] != 'P' || magic[1] != '6')
        throw io_error("not a binary PPM: " + path);
    long w = read_ppm_int(f);
    long h = read_ppm_int(f);
    long maxval = read_ppm_int(f);
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
        throw io_error("unsupported PPM geometry: " + path);
    int c = std::fgetc(f);  // single whitespace before raster
    if (c == EOF || !std::isspace(c)) throw io_error("malformed PPM header: " + path);

    RgbImage img(static_cast<int>(w), static_cast<int>(h));
    size_t n = img.pixels();
    int bytes_per = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raster(n * 3 * bytes_per);
    if (std::fread(raster.data(), 1, raster.size(), f) != raster.size())
        throw io_error("truncated PPM raster: " + path);
    float scale = 1.0f / static_cast<float>(maxval);
    for (size_t i = 0; i < n; ++i) {
        unsigned v[3];
        if (bytes_per == 1) {
            v[0] = raster[i * 3 + 0];
            v[1] = raster[i * 3 + 1];
            v[2] = raster[i * 3 + 2];
        } else {
            // PPM raster is big-endian.
            for (int ch = 0; ch < 3; ++ch)
                v[ch] = static_cast<unsigned>(raster[(i * 3 + ch) * 2]) << 8 |
                        raster[(i * 3 + ch) * 2 + 1];
        }
        img.r[i] = v[0] * scale;
        img.g[i] = v[1] * scale;
        img.b[i] = v[2] * scale;
    }
    return img;
}

struct PngRead {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngRead() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWrite {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWrite() { png_destroy_write_struct(&png, &info); }
};

RgbImage load_png(std::FILE* f, const std::string& path) {
    PngRead ctx;
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw io_error("libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw io_error("libpng init failed");
    if (setjmp(png_jmpbuf(ctx.png))) throw io_error("PNG decode failed: " + path);

    png_init_io(ctx.png, f);
    png_read_info(ctx.png, ctx.info);

    png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    int depth = png_get_bit_depth(ctx.png, ctx.info);
    int color = png_get_color_type(ctx.png, ctx.info);

    if (color != PNG_COLOR_TYPE_RGB && color != PNG_COLOR_TYPE_RGB_ALPHA)
        throw io_error("PNG is not RGB or RGBA: " + path);
    if (depth != 8 && depth != 16) throw io_error("unsupported PNG bit depth: " + path);
    if (w < 1 || h < 1 || w > (1u << 20) || h > (1u << 20))
        throw io_error("unsupported PNG geometry: " + path);

    if (color == PNG_COLOR_TYPE_RGB_ALPHA) png_set_strip_alpha(ctx.png);
    png_set_interlace_handling(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);
    std::vector<unsigned char> data(rowbytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = data.data() + rowbytes * y;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    RgbImage img(static_cast<int>(w), static_cast<int>(h));
    if (depth == 8) {
        constexpr float scale = 1.0f / 255.0f;
        for (png_uint_32 y = 0; y < h; ++y) {
            const unsigned char* row = rows[y];
            size_t base = static_cast<size_t>(y) * w;
            for (png_uint_32 x = 0; x < w; ++x) {
                img.r[base + x] = row[x * 3 + 0] * scale;
                img.g[base + x] = row[x * 3 + 1] * scale;
                img.b[base + x] = row[x * 3 + 2] * scale;
            }
        }
    } else {
        // 16-bit PNG samples are big-endian.
        constexpr float scale = 1.0f / 65535.0f;
        for (png_uint_32 y = 0; y < h; ++y) {
            const unsigned char* row = rows[y];
            size_t base = static_cast<size_t>(y) * w;
            for (png_uint_32 x = 0; x < w; ++x) {
                auto sample = [&](int ch) {
                    return static_cast<unsigned>(row[(x * 3 + ch) * 2]) << 8 |
                           row[(x * 3 + ch) * 2 + 1];
                };
                img.r[base + x] = sample(0) * scale;
                img.g[base + x] = sample(1) * scale;
                img.b[base + x] = sample(2) * scale;
            }
        }
    }
    return img;
}

}  // namespace

RgbImage load_rgb(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    unsigned char sig[8] = {};
    size_t got = std::fread(sig, 1, 8, f.get());
    std::rewind(f.get());
    if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) return load_png(f.get(), path);
    if (got >= 2 && sig[0] == 'P' && sig[1] == '6') return load_ppm(f.get(), path);
    throw io_error("unsupported image format: " + path);
}

void save_rgb(const RgbImage& img, const std::string& path) {
    if (img.width < 1 || img.height < 1 || img.r.size() != img.pixels() ||
        img.g.size() != img.pixels() || img.b.size() != img.pixels())
        throw std::invalid_argument("image planes do not match dimensions");
    FilePtr f = open_file(path, "wb");
    PngWrite ctx;
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw io_error("libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw io_error("libpng init failed");
    if (setjmp(png_jmpbuf(ctx.png))) throw io_error("PNG encode failed: " + path);

    png_init_io(ctx.png, f.get());
    png_set_IHDR(ctx.png, ctx.info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);

    std::vector<unsigned char> row(static_cast<size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        size_t base = static_cast<size_t>(y) * img.width;
        for (int x = 0; x < img.width; ++x) {
            auto quant = [](float v) {
                return static_cast<unsigned char>(
                    std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
            };
            row[x * 3 + 0] = quant(img.r[base + x]);
            row[x * 3 + 1] = quant(img.g[base + x]);
            row[x * 3 + 2] = quant(img.b[base + x]);
        }
        png_write_row(ctx.png, row.data());
    }
    png_write_end(ctx.png, nullptr);
    if (std::fflush(f.get()) != 0) throw io_error("write failed: " + path);
}

void save_error_map(const std::vector<double>& map, int width, int height,
                    const std::string& path) {
    if (width < 1 || height < 1 || map.size() != static_cast<size_t>(width) * height)
        throw std::invalid_argument("error map size does not match dimensions");
    double lo = map[0], hi = map[0];
    for (double v : map) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;

    FilePtr f = open_file(path, "wb");
    PngWrite ctx;
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw io_error("libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw io_error("libpng init failed");
    if (setjmp(png_jmpbuf(ctx.png))) throw io_error("PNG encode failed: " + path);

    png_init_io(ctx.png, f.get());
    png_set_IHDR(ctx.png, ctx.info, width, height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);

    std::vector<unsigned char> row(static_cast<size_t>(width) * 2);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double v = map[static_cast<size_t>(y) * width + x];
            auto q = static_cast<unsigned>(std::lround((v - lo) * scale));
            row[x * 2] = static_cast<unsigned char>(q >> 8);
            row[x * 2 + 1] = static_cast<unsigned char>(q & 0xff);
        }
        png_write_row(ctx.png, row.data());
    }
    png_write_end(ctx.png, nullptr);

    std::ofstream sidecar(path + ".minmax.txt");
    if (!sidecar) throw io_error("cannot write sidecar for " + path);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", lo, hi);
    sidecar << buf;
}

namespace {

// Mirror an arbitrary integer into [0, n) without duplicating the edge
// sample; n == 1 degenerates to edge replication.
int reflect_index(int i, int n) {
    if (n == 1) return 0;
    int period = 2 * n - 2;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

}  // namespace

std::pair<RgbImage, PaddingRecord> pad_reflect8(const RgbImage& img) {
    int pad_w = (8 - img.width % 8) % 8;
    int pad_h = (8 - img.height % 8) % 8;
    PaddingRecord rec{pad_w / 2, pad_w - pad_w / 2, pad_h / 2, pad_h - pad_h / 2};
    if (rec.empty()) return {img, rec};

    RgbImage out(img.width + pad_w, img.height + pad_h);
    for (int y = 0; y < out.height; ++y) {
        int sy = reflect_index(y - rec.top, img.height);
        size_t src_base = static_cast<size_t>(sy) * img.width;
        size_t dst_base = static_cast<size_t>(y) * out.width;
        for (int x = 0; x < out.width; ++x) {
            int sx = reflect_index(x - rec.left, img.width);
            out.r[dst_base + x] = img.r[src_base + sx];
            out.g[dst_base + x] = img.g[src_base + sx];
            out.b[dst_base + x] = img.b[src_base + sx];
        }
    }
    return {std::move(out), rec};
}

RgbImage crop_to(const RgbImage& img, const PaddingRecord& record) {
    if (record.left < 0 || record.right < 0 || record.top < 0 || record.bottom < 0)
        throw std::invalid_argument("negative padding record");
    int w = img.width - record.left - record.right;
    int h = img.height - record.top - record.bottom;
    if (w < 1 || h < 1)
        throw std::invalid_argument("padding record larger than image");
    if (record.empty()) return img;

    RgbImage out(w, h);
    for (int y = 0; y < h; ++y) {
        size_t src = static_cast<size_t>(y + record.top) * img.width + record.left;
        size_t dst = static_cast<size_t>(y) * w;
        std::copy_n(img.r.begin() + src, w, out.r.begin() + dst);
        std::copy_n(img.g.begin() + src, w, out.g.begin() + dst);
        std::copy_n(img.b.begin() + src, w, out.b.begin() + dst);
    }
    return out;
}

void write_hvi1(const HviImage& img, const std::string& path) {
    FilePtr f = open_file(path, "wb");
    if (std::fwrite("HVI1", 1, 4, f.get()) != 4) throw io_error("write failed: " + path);
    put_u32le(f.get(), static_cast<uint32_t>(img.width));
    put_u32le(f.get(), static_cast<uint32_t>(img.height));
    put_f32le(f.get(), static_cast<float>(img.params.k));
    unsigned char variant = static_cast<unsigned char>(img.params.variant);
    if (std::fwrite(&variant, 1, 1, f.get()) != 1) throw io_error("write failed: " + path);
    write_plane_f32le(f.get(), img.h_hat);
    write_plane_f32le(f.get(), img.v_hat);
    write_plane_f32le(f.get(), img.intensity);
    if (std::fflush(f.get()) != 0) throw io_error("write failed: " + path);
}

HviImage read_hvi1(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    char magic[4];
    if (std::fread(magic, 1, 4, f.get()) != 4 || std::memcmp(magic, "HVI1", 4) != 0)
        throw io_error("not an HVI1 file: " + path);
    uint32_t w = get_u32le(f.get());
    uint32_t h = get_u32le(f.get());
    float k = get_f32le(f.get());
    unsigned char variant;
    if (std::fread(&variant, 1, 1, f.get()) != 1) throw io_error("unexpected end of file: " + path);
    if (w < 1 || h < 1 || w > (1u << 20) || h > (1u << 20) ||
        static_cast<uint64_t>(w) * h > (1u << 26))
        throw io_error("unsupported HVI1 geometry: " + path);
    if (!(k > 0.0f) || !std::isfinite(k)) throw io_error("invalid k in HVI1 file: " + path);
    if (variant > 2) throw io_error("invalid collapse variant in HVI1 file: " + path);

    HviParams params;
    params.k = k;
    params.variant = static_cast<CollapseVariant>(variant);
    HviImage img(static_cast<int>(w), static_cast<int>(h), params);
    read_plane_f32le(f.get(), img.h_hat);
    read_plane_f32le(f.get(), img.v_hat);
    read_plane_f32le(f.get(), img.intensity);
    return img;
}

}  // namespace hvi
