#pragma once

// Shared test helpers: deterministic image generators, independent
// reference implementations used as oracles, and a subprocess runner for
// the CLI tests.

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hvi/image.hpp"

namespace testsupport {

inline double urand(std::mt19937& rng) {
    return static_cast<double>(rng()) / 4294967296.0;
}

inline hvi::RgbImage random_image(std::mt19937& rng, int w, int h) {
    hvi::RgbImage img(w, h);
    for (size_t i = 0; i < img.pixels(); ++i) {
        img.r[i] = static_cast<float>(urand(rng));
        img.g[i] = static_cast<float>(urand(rng));
        img.b[i] = static_cast<float>(urand(rng));
    }
    return img;
}

// Textbook HSV conversion, kept structurally separate from the library
// implementation (degrees route, no shared code).
struct OracleHsv {
    double h_turns, s, v;
};

inline OracleHsv oracle_rgb_to_hsv(double r, double g, double b) {
    double mx = r > g ? (r > b ? r : b) : (g > b ? g : b);
    double mn = r < g ? (r < b ? r : b) : (g < b ? g : b);
    double c = mx - mn;
    OracleHsv out{0.0, 0.0, mx};
    if (mx <= 0.0 || c <= 0.0) return out;
    out.s = c / mx;
    double deg;
    if (mx == r) {
        deg = 60.0 * ((g - b) / c);
        if (deg < 0.0) deg += 360.0;
        if (deg >= 360.0) deg = 0.0;
    } else if (mx == g) {
        deg = 60.0 * ((b - r) / c) + 120.0;
    } else {
        deg = 60.0 * ((r - g) / c) + 240.0;
    }
    out.h_turns = deg / 360.0;
    if (out.h_turns >= 1.0) out.h_turns = 0.0;
    return out;
}

inline void oracle_hsv_to_rgb(double h_turns, double s, double v, double& r, double& g,
                              double& b) {
    if (s <= 0.0) {
        r = g = b = v;
        return;
    }
    double deg = h_turns * 360.0;
    int sector = static_cast<int>(deg / 60.0);
    if (sector > 5) sector = 5;
    double f = deg / 60.0 - sector;
    double p = v * (1.0 - s);
    double q = v * (1.0 - s * f);
    double t = v * (1.0 - s * (1.0 - f));
    switch (sector) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
}

// Direct-window SSIM used as an oracle: no separable filtering, weights
// recomputed locally.
inline double naive_ssim_channel(const hvi::Plane& x, const hvi::Plane& y, int w, int h) {
    std::array<std::array<double, 11>, 11> win{};
    double wsum = 0.0;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) {
            double di = i - 5, dj = j - 5;
            win[i][j] = std::exp(-(di * di + dj * dj) / (2.0 * 1.5 * 1.5));
            wsum += win[i][j];
        }
    for (auto& row : win)
        for (double& v : row) v /= wsum;

    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    double total = 0.0;
    long count = 0;
    for (int cy = 0; cy + 11 <= h; ++cy)
        for (int cx = 0; cx + 11 <= w; ++cx) {
            double mx = 0, my = 0, exx = 0, eyy = 0, exy = 0;
            for (int i = 0; i < 11; ++i)
                for (int j = 0; j < 11; ++j) {
                    double a = x[static_cast<size_t>(cy + i) * w + cx + j];
                    double b = y[static_cast<size_t>(cy + i) * w + cx + j];
                    mx += win[i][j] * a;
                    my += win[i][j] * b;
                    exx += win[i][j] * a * a;
                    eyy += win[i][j] * b * b;
                    exy += win[i][j] * a * b;
                }
            double vx = exx - mx * mx, vy = eyy - my * my, cov = exy - mx * my;
            total += ((2 * mx * my + c1) * (2 * cov + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    return total / count;
}

inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::mt19937 rng(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() /
               ("hvi_" + tag + "_" + std::to_string(rng()));
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += "'";
    return out;
}

#ifdef HVI_TOOL_PATH
// Runs the CLI binary; returns the exit code and captures stdout. `env`
// is an optional NAME=value prefix.
inline int run_tool(const std::vector<std::string>& args, std::string* stdout_text = nullptr,
                    const std::string& env = {}) {
    auto out_file = make_temp_dir("out") / "stdout.txt";
    std::string cmd = env.empty() ? "" : env + " ";
    cmd += shell_quote(HVI_TOOL_PATH);
    for (const auto& a : args) cmd += " " + shell_quote(a);
    cmd += " > " + shell_quote(out_file.string()) + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    if (stdout_text) {
        std::ifstream in(out_file);
        std::stringstream ss;
        ss << in.rdbuf();
        *stdout_text = ss.str();
    }
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
#endif

}  // namespace testsupport
