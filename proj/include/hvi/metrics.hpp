#pragma once

#include <string>
#include <vector>

#include "hvi/image.hpp"
#include "hvi/params.hpp"

namespace hvi {

/// One prediction/reference measurement. q is the mean-luma ratio
/// pred/ref used by GT-mean alignment.
struct QualityReport {
    double psnr = 0.0;   // dB, +inf for identical images
    double ssim = 0.0;
    double mean_pred = 0.0;
    double mean_ref = 0.0;
    double q = 0.0;
    bool gt_mean_applied = false;
};

std::string quality_csv_header();
std::string quality_csv_row(const std::string& path_pred, const std::string& path_ref,
                            const QualityReport& rep);

/// 10*log10(1/MSE) over all samples of all three channels, MAX = 1.
/// Returns +inf when MSE is zero.
double psnr(const RgbImage& pred, const RgbImage& ref);

/// Mean SSIM, 11x11 Gaussian window (sigma 1.5), C1 = 0.01^2, C2 = 0.03^2,
/// computed per channel on valid windows and averaged. Requires both image
/// sides >= 11.
double ssim(const RgbImage& pred, const RgbImage& ref);

double mean_luma(const RgbImage& img);

/// Scales pred by 1/q, q = mean_luma(pred)/mean_luma(ref), and clips, so
/// the output's mean luma matches the reference's. Throws on a zero-mean
/// reference. The returned report carries the pre-alignment means and q.
RgbImage gt_mean_normalize(const RgbImage& pred, const RgbImage& ref, QualityReport* rep = nullptr);

/// Full pred/ref measurement; applies GT-mean first when requested.
QualityReport measure(const RgbImage& pred, const RgbImage& ref, bool gt_mean);

/// Value-replacement: keeps the low-light image's hue and saturation and
/// substitutes the reference's value plane.
RgbImage correct_value(const RgbImage& lowlight, const RgbImage& ref);

enum class ErrorSpace { SRGB, HSV_HS, HVI_HV };

/// Per-pixel Euclidean distance between the two images' coordinates in the
/// chosen subspace: (R,G,B), rectangular (6H, S), or (H_hat, V_hat).
std::vector<double> error_map(const RgbImage& a, const RgbImage& b, ErrorSpace space,
                              const HviParams& params);

/// The four color-space configurations of the corrected-image study:
/// plain HSV, polarization only, collapse only, and full HVI.
enum class AblationSpace { Hsv, PolOnly, CkOnly, Hvi };

struct CorrectedPsnr {
    double hsv = 0.0;
    double pol_only = 0.0;
    double ck_only = 0.0;
    double hvi = 0.0;
};

/// PSNR between the corrected image (the low image with its value plane
/// replaced by the reference's) and the reference, measured in one
/// space's coordinates: three planes (chroma pair, intensity) where the
/// chroma pair is the polarized circle or the raw hue axis in turns,
/// radius-weighted by S, D_T and, when enabled, C_k. The replacement is
/// applied on the HSV triples directly, so identical inputs give the
/// +inf sentinel exactly.
double corrected_psnr(const RgbImage& low, const RgbImage& ref, AblationSpace space,
                      const HviParams& params);

/// All four spaces with one decomposition of each image.
CorrectedPsnr corrected_psnr_all(const RgbImage& low, const RgbImage& ref,
                                 const HviParams& params);

/// Per-pixel Euclidean distance between the two embeddings.
std::vector<double> corrected_error_map(const RgbImage& low, const RgbImage& ref,
                                        AblationSpace space, const HviParams& params);

/// For each pair, replaces the low image's value plane with the
/// reference's and measures the corrected image against the reference in
/// all four spaces. Returns the mean of per-pair PSNRs, accumulated in
/// input order. Throws on an empty list.
CorrectedPsnr mean_psnr_corrected(
    const std::vector<std::pair<RgbImage, RgbImage>>& pairs,
    const HviParams& space_params);

}  // namespace hvi
