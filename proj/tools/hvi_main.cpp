// Batch front end for the HVI color library: forward/inverse transforms,
// quality reports, the corrected-image color-space ablation, and collapse
// curve sweeps.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hvi/generalize.hpp"
#include "hvi/imgio.hpp"
#include "hvi/metrics.hpp"
#include "hvi/transform.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInvariant = 4;

// Numerical-invariant violations detected at runtime (exit code 4).
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ToHviArgs {
    std::string input, output;
    double k = 1.0;
    std::string variant = "sin";
    double gamma_g = 2.0, gamma_b = 4.0;
    std::string sat = "unit";
};

struct FromHviArgs {
    std::string input, output;
    double alpha_s = 1.0, alpha_i = 1.0;
};

struct ReportArgs {
    std::string pred, ref, csv;
    bool gt_mean = false;
};

struct AblateArgs {
    std::string low, ref, csv, error_maps;
    double k = 1.0;
};

struct SweepArgs {
    std::string ks, out;
    int samples = 256;
    std::string variant = "sin";
};

hvi::CollapseVariant parse_variant(const std::string& name) {
    if (name == "sin") return hvi::CollapseVariant::Sin;
    if (name == "linear") return hvi::CollapseVariant::Linear;
    if (name == "log") return hvi::CollapseVariant::Log;
    throw std::invalid_argument("unknown collapse variant: " + name);
}

hvi::SatFn parse_sat(const std::string& spec) {
    if (spec == "unit") return hvi::SatFn::unit();
    if (spec == "parabolic") return hvi::SatFn::parabolic();
    if (spec.rfind("file:", 0) == 0) return hvi::SatFn::from_file(spec.substr(5));
    throw std::invalid_argument("unknown saturation function: " + spec);
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".ppm";
}

std::vector<fs::path> list_images(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    return files;
}

// Pairs two inputs that are either both files or both directories;
// directories pair by sorted filename and must match in count.
std::vector<std::pair<fs::path, fs::path>> pair_inputs(const std::string& a,
                                                       const std::string& b) {
    bool dir_a = fs::is_directory(a), dir_b = fs::is_directory(b);
    if (!fs::exists(a) || !fs::exists(b))
        throw hvi::io_error("input path does not exist: " + (fs::exists(a) ? b : a));
    if (dir_a != dir_b)
        throw std::invalid_argument("inputs must both be files or both be directories");
    if (!dir_a) return {{a, b}};
    auto lhs = list_images(a);
    auto rhs = list_images(b);
    if (lhs.size() != rhs.size())
        throw std::invalid_argument("directories hold different image counts");
    if (lhs.empty()) throw std::invalid_argument("no images found in " + a);
    std::vector<std::pair<fs::path, fs::path>> pairs(lhs.size());
    for (size_t i = 0; i < lhs.size(); ++i) pairs[i] = {lhs[i], rhs[i]};
    return pairs;
}

std::ostream& open_csv(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw hvi::io_error("cannot write " + path);
    return file;
}

int run_to_hvi(const ToHviArgs& args) {
    hvi::HviParams params;
    params.k = args.k;
    params.variant = parse_variant(args.variant);
    params.remap = {args.gamma_g, args.gamma_b};
    params.sat_fn = parse_sat(args.sat);
    params.validate();

    hvi::RgbImage img = hvi::load_rgb(args.input);
    hvi::HviImage out = hvi::rgb_to_hvi(img, params);
    double excess = out.max_domain_excess();
    if (excess > 1e-6)
        throw invariant_error("transform left the clip domain by " + std::to_string(excess));
    hvi::write_hvi1(out, args.output);
    std::cout << "size: " << out.width << "x" << out.height << "\n"
              << "k: " << params.k << "\nvariant: " << args.variant << "\ngamma_g: "
              << params.remap.gamma_g << "\ngamma_b: " << params.remap.gamma_b
              << "\nsat: " << args.sat << "\nwrote: " << args.output << "\n";
    return 0;
}

int run_from_hvi(const FromHviArgs& args) {
    hvi::HviImage img = hvi::read_hvi1(args.input);
    hvi::HviParams params = img.params;
    params.alpha_s = args.alpha_s;
    params.alpha_i = args.alpha_i;
    params.validate();
    hvi::RgbImage out = hvi::hvi_to_rgb(hvi::clip_to_domain(img), params);
    hvi::save_rgb(out, args.output);
    std::cout << "size: " << out.width << "x" << out.height << "\nwrote: " << args.output
              << "\n";
    return 0;
}

int run_report(const ReportArgs& args) {
    auto pairs = pair_inputs(args.pred, args.ref);
    std::ofstream csv_file;
    std::ostream& csv = open_csv(csv_file, args.csv);
    csv << hvi::quality_csv_header() << "\n";

    double sum_psnr = 0.0, sum_ssim = 0.0, sum_q = 0.0;
    for (const auto& [pred_path, ref_path] : pairs) {
        hvi::RgbImage pred = hvi::load_rgb(pred_path.string());
        hvi::RgbImage ref = hvi::load_rgb(ref_path.string());
        hvi::QualityReport rep = hvi::measure(pred, ref, args.gt_mean);
        csv << hvi::quality_csv_row(pred_path.string(), ref_path.string(), rep) << "\n";
        sum_psnr += rep.psnr;
        sum_ssim += rep.ssim;
        sum_q += rep.q;
    }
    double n = static_cast<double>(pairs.size());
    std::printf("pairs: %zu\nmean_psnr_db: %f\nmean_ssim: %f\nmean_q: %f\n", pairs.size(),
                sum_psnr / n, sum_ssim / n, sum_q / n);
    return 0;
}

const char* ablation_name(hvi::AblationSpace space) {
    switch (space) {
        case hvi::AblationSpace::Hsv: return "hsv";
        case hvi::AblationSpace::PolOnly: return "pol_only";
        case hvi::AblationSpace::CkOnly: return "ck_only";
        case hvi::AblationSpace::Hvi: return "hvi";
    }
    return "?";
}

int run_ablate(const AblateArgs& args) {
    auto pairs = pair_inputs(args.low, args.ref);
    hvi::HviParams params;
    params.k = args.k;
    params.validate();

    if (!args.error_maps.empty()) fs::create_directories(args.error_maps);

    constexpr hvi::AblationSpace spaces[] = {hvi::AblationSpace::Hsv, hvi::AblationSpace::PolOnly,
                                             hvi::AblationSpace::CkOnly, hvi::AblationSpace::Hvi};
    double sums[4] = {};
    for (const auto& [low_path, ref_path] : pairs) {
        hvi::RgbImage low = hvi::load_rgb(low_path.string());
        hvi::RgbImage ref = hvi::load_rgb(ref_path.string());
        hvi::CorrectedPsnr one = hvi::corrected_psnr_all(low, ref, params);
        sums[0] += one.hsv;
        sums[1] += one.pol_only;
        sums[2] += one.ck_only;
        sums[3] += one.hvi;
        if (!args.error_maps.empty()) {
            for (int s = 0; s < 4; ++s) {
                auto map = hvi::corrected_error_map(low, ref, spaces[s], params);
                fs::path out = fs::path(args.error_maps) /
                               (low_path.stem().string() + "_" + ablation_name(spaces[s]) + ".png");
                hvi::save_error_map(map, ref.width, ref.height, out.string());
            }
        }
    }

    std::ofstream csv_file;
    std::ostream& csv = open_csv(csv_file, args.csv);
    csv << "space,psnr_db\n";
    for (int s = 0; s < 4; ++s) {
        double mean = sums[s] / static_cast<double>(pairs.size());
        csv << ablation_name(spaces[s]) << "," << mean << "\n";
        std::printf("%s: %f dB\n", ablation_name(spaces[s]), mean);
    }
    return 0;
}

int run_sweep(const SweepArgs& args) {
    std::vector<double> ks;
    std::string token;
    std::stringstream ss(args.ks);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        size_t pos = 0;
        double k = std::stod(token, &pos);
        if (pos != token.size() || !(k > 0.0))
            throw std::invalid_argument("bad k value: " + token);
        ks.push_back(k);
    }
    if (ks.empty()) throw std::invalid_argument("--ks must list at least one k > 0");
    if (args.samples < 2) throw std::invalid_argument("--samples must be >= 2");

    std::ofstream out(args.out);
    if (!out) throw hvi::io_error("cannot write " + args.out);
    out << "k,i,c\n";
    char buf[96];
    for (double k : ks) {
        hvi::HviParams params;
        params.k = k;
        params.variant = parse_variant(args.variant);
        for (int j = 0; j < args.samples; ++j) {
            double i = static_cast<double>(j) / (args.samples - 1);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", k, i,
                          hvi::collapse_value(i, params));
            out << buf;
        }
    }
    std::printf("wrote: %s (%zu ks, %d samples each)\n", args.out.c_str(), ks.size(),
                args.samples);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HVI color space batch tool"};
    app.set_config("--config")->description("key=value file mirroring the flags");
    uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for commands that use randomness")->capture_default_str();
    app.require_subcommand(1);

    ToHviArgs to_args;
    auto* to = app.add_subcommand("to-hvi", "sRGB PNG -> HVI1 tensor");
    to->add_option("--input", to_args.input, "input image")->required();
    to->add_option("--output", to_args.output, "output .hvi1 path")->required();
    to->add_option("--k", to_args.k, "darkness density (> 0)")->capture_default_str();
    to->add_option("--variant", to_args.variant, "collapse variant: sin|linear|log")
        ->capture_default_str();
    to->add_option("--gamma-g", to_args.gamma_g, "hue remap green anchor")->capture_default_str();
    to->add_option("--gamma-b", to_args.gamma_b, "hue remap blue anchor")->capture_default_str();
    to->add_option("--sat", to_args.sat, "saturation weight: unit|parabolic|file:<path>")
        ->capture_default_str();

    FromHviArgs from_args;
    auto* from = app.add_subcommand("from-hvi", "HVI1 tensor -> sRGB PNG");
    from->add_option("--input", from_args.input, "input .hvi1 path")->required();
    from->add_option("--output", from_args.output, "output PNG path")->required();
    from->add_option("--alpha-s", from_args.alpha_s, "saturation gain")->capture_default_str();
    from->add_option("--alpha-i", from_args.alpha_i, "brightness gain")->capture_default_str();

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "PSNR/SSIM quality report");
    report->add_option("--pred", report_args.pred, "prediction file or directory")->required();
    report->add_option("--ref", report_args.ref, "reference file or directory")->required();
    report->add_flag("--gt-mean", report_args.gt_mean, "align mean luma to the reference first");
    report->add_option("--csv", report_args.csv, "write rows to this CSV instead of stdout");

    AblateArgs ablate_args;
    auto* ablate = app.add_subcommand("ablate-space",
                                      "corrected-image PSNR across color-space configurations");
    ablate->add_option("--low", ablate_args.low, "low-light directory")->required();
    ablate->add_option("--ref", ablate_args.ref, "reference directory")->required();
    ablate->add_option("--k", ablate_args.k, "darkness density (> 0)")->capture_default_str();
    ablate->add_option("--csv", ablate_args.csv, "write rows to this CSV instead of stdout");
    ablate->add_option("--error-maps", ablate_args.error_maps,
                       "directory for per-image error-map PNGs");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep-k", "sample the collapse curve family");
    sweep->add_option("--ks", sweep_args.ks, "comma-separated k values")->required();
    sweep->add_option("--samples", sweep_args.samples, "intensity samples per k")
        ->capture_default_str();
    sweep->add_option("--out", sweep_args.out, "output CSV path")->required();
    sweep->add_option("--variant", sweep_args.variant, "collapse variant: sin|linear|log")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (to->parsed()) return run_to_hvi(to_args);
        if (from->parsed()) return run_from_hvi(from_args);
        if (report->parsed()) return run_report(report_args);
        if (ablate->parsed()) return run_ablate(ablate_args);
        if (sweep->parsed()) return run_sweep(sweep_args);
    } catch (const invariant_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const hvi::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitUsage;
}
