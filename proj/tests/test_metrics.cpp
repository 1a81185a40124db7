#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hvi/metrics.hpp"
#include "hvi/transform.hpp"
#include "corpus.hpp"
#include "support.hpp"

using namespace hvi;
using testsupport::urand;

namespace {

RgbImage constant_image(int w, int h, float v) {
    RgbImage img(w, h);
    std::fill(img.r.begin(), img.r.end(), v);
    std::fill(img.g.begin(), img.g.end(), v);
    std::fill(img.b.begin(), img.b.end(), v);
    return img;
}

RgbImage shuffled(const RgbImage& img, const std::vector<size_t>& perm) {
    RgbImage out(img.width, img.height);
    for (size_t i = 0; i < perm.size(); ++i) {
        out.r[i] = img.r[perm[i]];
        out.g[i] = img.g[perm[i]];
        out.b[i] = img.b[perm[i]];
    }
    return out;
}

}  // namespace

TEST_CASE("psnr") {
    std::mt19937 rng(3);

    SUBCASE("identical images give the infinity sentinel") {
        RgbImage img = testsupport::random_image(rng, 16, 16);
        CHECK(std::isinf(psnr(img, img)));
    }
    SUBCASE("constant +0.1 offset gives 20 dB") {
        RgbImage ref(32, 32);
        for (size_t i = 0; i < ref.pixels(); ++i) {
            ref.r[i] = static_cast<float>(0.9 * urand(rng));
            ref.g[i] = static_cast<float>(0.9 * urand(rng));
            ref.b[i] = static_cast<float>(0.9 * urand(rng));
        }
        RgbImage pred = ref;
        for (Plane* pl : {&pred.r, &pred.g, &pred.b})
            for (float& v : *pl) v += 0.1f;
        CHECK(psnr(pred, ref) == doctest::Approx(20.0).epsilon(1e-5));
    }
    SUBCASE("checkerboard against mid-gray gives 6.0206 dB") {
        RgbImage board(16, 16);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) {
                float v = (x + y) % 2 ? 1.0f : 0.0f;
                size_t i = static_cast<size_t>(y) * 16 + x;
                board.r[i] = board.g[i] = board.b[i] = v;
            }
        CHECK(psnr(board, constant_image(16, 16, 0.5f)) ==
              doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-12));
        CHECK(10.0 * std::log10(4.0) == doctest::Approx(6.0206).epsilon(1e-5));
    }
    SUBCASE("symmetric and permutation invariant") {
        RgbImage a = testsupport::random_image(rng, 12, 9);
        RgbImage b = testsupport::random_image(rng, 12, 9);
        CHECK(psnr(a, b) == psnr(b, a));

        std::vector<size_t> perm(a.pixels());
        for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        CHECK(psnr(shuffled(a, perm), shuffled(b, perm)) == doctest::Approx(psnr(a, b)).epsilon(1e-12));
    }
    SUBCASE("dimension mismatch throws") {
        CHECK_THROWS_AS(psnr(RgbImage(3, 3), RgbImage(3, 4)), std::invalid_argument);
    }
}

TEST_CASE("ssim") {
    std::mt19937 rng(5);

    SUBCASE("identical and constant images give 1") {
        RgbImage img = testsupport::random_image(rng, 24, 18);
        CHECK(ssim(img, img) == doctest::Approx(1.0).epsilon(1e-12));
        RgbImage gray = constant_image(16, 16, 0.5f);
        CHECK(ssim(gray, gray) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("matches the direct-window oracle") {
        RgbImage a = testsupport::random_image(rng, 20, 15);
        RgbImage b = testsupport::random_image(rng, 20, 15);
        double oracle = (testsupport::naive_ssim_channel(a.r, b.r, 20, 15) +
                         testsupport::naive_ssim_channel(a.g, b.g, 20, 15) +
                         testsupport::naive_ssim_channel(a.b, b.b, 20, 15)) /
                        3.0;
        CHECK(ssim(a, b) == doctest::Approx(oracle).epsilon(1e-9));
    }
    SUBCASE("inversion of a mid-gray-free image scores low") {
        RgbImage a(24, 24);
        for (size_t i = 0; i < a.pixels(); ++i) {
            auto sample = [&] {
                double v = urand(rng);
                return static_cast<float>(v < 0.5 ? 0.3 * v / 0.5 : 0.7 + 0.3 * (v - 0.5) / 0.5);
            };
            a.r[i] = sample();
            a.g[i] = sample();
            a.b[i] = sample();
        }
        RgbImage inv(24, 24);
        for (size_t i = 0; i < a.pixels(); ++i) {
            inv.r[i] = 1.0f - a.r[i];
            inv.g[i] = 1.0f - a.g[i];
            inv.b[i] = 1.0f - a.b[i];
        }
        double got = ssim(inv, a);
        CHECK(got < 0.1);
        double oracle = (testsupport::naive_ssim_channel(inv.r, a.r, 24, 24) +
                         testsupport::naive_ssim_channel(inv.g, a.g, 24, 24) +
                         testsupport::naive_ssim_channel(inv.b, a.b, 24, 24)) /
                        3.0;
        CHECK(got == doctest::Approx(oracle).epsilon(1e-9));
    }
    SUBCASE("invariant under mirroring both images") {
        // Windowed SSIM is tied to spatial structure, so arbitrary pixel
        // permutations change it; spatial isometries are the symmetry it
        // actually has.
        RgbImage a = testsupport::random_image(rng, 18, 14);
        RgbImage b = testsupport::random_image(rng, 18, 14);
        auto mirrored = [](const RgbImage& img) {
            RgbImage out(img.width, img.height);
            for (int y = 0; y < img.height; ++y)
                for (int x = 0; x < img.width; ++x) {
                    size_t src = static_cast<size_t>(y) * img.width + (img.width - 1 - x);
                    size_t dst = static_cast<size_t>(y) * img.width + x;
                    out.r[dst] = img.r[src];
                    out.g[dst] = img.g[src];
                    out.b[dst] = img.b[src];
                }
            return out;
        };
        CHECK(ssim(mirrored(a), mirrored(b)) == doctest::Approx(ssim(a, b)).epsilon(1e-12));
    }
    SUBCASE("images smaller than the window throw") {
        CHECK_THROWS_AS(ssim(RgbImage(10, 16), RgbImage(10, 16)), std::invalid_argument);
    }
}

TEST_CASE("gt_mean_normalize") {
    std::mt19937 rng(7);
    RgbImage ref(16, 16);
    for (size_t i = 0; i < ref.pixels(); ++i) {
        ref.r[i] = static_cast<float>(0.1 + 0.3 * urand(rng));
        ref.g[i] = static_cast<float>(0.1 + 0.3 * urand(rng));
        ref.b[i] = static_cast<float>(0.1 + 0.3 * urand(rng));
    }

    SUBCASE("identity when means already match") {
        QualityReport rep;
        RgbImage out = gt_mean_normalize(ref, ref, &rep);
        CHECK(rep.q == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(out.r == ref.r);
    }
    SUBCASE("doubled prediction comes back to the reference") {
        RgbImage pred = ref;
        for (Plane* pl : {&pred.r, &pred.g, &pred.b})
            for (float& v : *pl) v *= 2.0f;
        QualityReport rep;
        RgbImage out = gt_mean_normalize(pred, ref, &rep);
        CHECK(rep.q == doctest::Approx(2.0).epsilon(1e-6));
        for (size_t i = 0; i < out.pixels(); ++i)
            CHECK(out.r[i] == doctest::Approx(ref.r[i]).epsilon(1e-6));
    }
    SUBCASE("halved prediction comes back to the reference") {
        RgbImage pred = ref;
        for (Plane* pl : {&pred.r, &pred.g, &pred.b})
            for (float& v : *pl) v *= 0.5f;
        QualityReport rep;
        RgbImage out = gt_mean_normalize(pred, ref, &rep);
        CHECK(rep.q == doctest::Approx(0.5).epsilon(1e-6));
        for (size_t i = 0; i < out.pixels(); ++i)
            CHECK(out.r[i] == doctest::Approx(ref.r[i]).epsilon(1e-6));
    }
    SUBCASE("aligned mean luma within 2% when clipping is rare") {
        RgbImage pred = testsupport::random_image(rng, 16, 16);
        for (Plane* pl : {&pred.r, &pred.g, &pred.b})
            for (float& v : *pl) v *= 0.6f;
        RgbImage out = gt_mean_normalize(pred, ref, nullptr);
        CHECK(mean_luma(out) == doctest::Approx(mean_luma(ref)).epsilon(0.02));
    }
    SUBCASE("zero-mean reference throws") {
        CHECK_THROWS_AS(gt_mean_normalize(ref, RgbImage(16, 16), nullptr), std::invalid_argument);
    }
}

TEST_CASE("correct_value") {
    std::mt19937 rng(11);
    RgbImage ref = testsupport::random_image(rng, 24, 16);

    SUBCASE("self-replacement is the identity") {
        RgbImage out = correct_value(ref, ref);
        for (size_t i = 0; i < ref.pixels(); ++i) {
            CHECK(out.r[i] == doctest::Approx(ref.r[i]).epsilon(1e-6).scale(1));
            CHECK(out.g[i] == doctest::Approx(ref.g[i]).epsilon(1e-6).scale(1));
            CHECK(out.b[i] == doctest::Approx(ref.b[i]).epsilon(1e-6).scale(1));
        }
    }
    SUBCASE("uniform darkening is fully undone") {
        RgbImage low = ref;
        for (Plane* pl : {&low.r, &low.g, &low.b})
            for (float& v : *pl) v *= 0.5f;
        RgbImage out = correct_value(low, ref);
        for (size_t i = 0; i < ref.pixels(); ++i) {
            CHECK(out.r[i] == doctest::Approx(ref.r[i]).epsilon(1e-6).scale(1));
            CHECK(out.g[i] == doctest::Approx(ref.g[i]).epsilon(1e-6).scale(1));
            CHECK(out.b[i] == doctest::Approx(ref.b[i]).epsilon(1e-6).scale(1));
        }
    }
    SUBCASE("gray input stays gray at the reference value") {
        RgbImage gray = constant_image(24, 16, 0.2f);
        RgbImage out = correct_value(gray, ref);
        Plane v_ref = intensity_map(ref);
        for (size_t i = 0; i < ref.pixels(); ++i) {
            CHECK(out.r[i] == v_ref[i]);
            CHECK(out.g[i] == v_ref[i]);
            CHECK(out.b[i] == v_ref[i]);
        }
    }
    SUBCASE("idempotent") {
        RgbImage low = testsupport::random_image(rng, 24, 16);
        RgbImage once = correct_value(low, ref);
        RgbImage twice = correct_value(once, ref);
        for (size_t i = 0; i < ref.pixels(); ++i) {
            CHECK(twice.r[i] == doctest::Approx(once.r[i]).epsilon(1e-6).scale(1));
            CHECK(twice.g[i] == doctest::Approx(once.g[i]).epsilon(1e-6).scale(1));
            CHECK(twice.b[i] == doctest::Approx(once.b[i]).epsilon(1e-6).scale(1));
        }
    }
}

TEST_CASE("error_map") {
    HviParams params;
    std::mt19937 rng(13);

    SUBCASE("identical images give the zero plane") {
        RgbImage img = testsupport::random_image(rng, 12, 12);
        for (auto space : {ErrorSpace::SRGB, ErrorSpace::HSV_HS, ErrorSpace::HVI_HV}) {
            auto map = error_map(img, img, space, params);
            for (double v : map) CHECK(v == 0.0);
        }
    }
    SUBCASE("near-red pair exposes the hue-axis discontinuity") {
        HsvImage a(1, 1), b(1, 1);
        a.hue[0] = 0.001f;
        b.hue[0] = 0.999f;
        a.saturation[0] = b.saturation[0] = 1.0f;
        a.value[0] = b.value[0] = 1.0f;
        RgbImage ra = hsv_to_rgb(a), rb = hsv_to_rgb(b);

        auto hs = error_map(ra, rb, ErrorSpace::HSV_HS, params);
        CHECK(hs[0] == doctest::Approx(5.988).epsilon(1e-3));
        auto hv = error_map(ra, rb, ErrorSpace::HVI_HV, params);
        CHECK(hv[0] <= 0.02);
    }
    SUBCASE("black pixels collapse together") {
        RgbImage a(1, 1), b(1, 1);
        auto hv = error_map(a, b, ErrorSpace::HVI_HV, params);
        CHECK(hv[0] <= 2.0 * params.epsilon);
    }
    SUBCASE("symmetric and nonnegative") {
        RgbImage a = testsupport::random_image(rng, 9, 9);
        RgbImage b = testsupport::random_image(rng, 9, 9);
        for (auto space : {ErrorSpace::SRGB, ErrorSpace::HSV_HS, ErrorSpace::HVI_HV}) {
            auto ab = error_map(a, b, space, params);
            auto ba = error_map(b, a, space, params);
            for (size_t i = 0; i < ab.size(); ++i) {
                CHECK(ab[i] >= 0.0);
                CHECK(ab[i] == ba[i]);
            }
        }
    }
}

TEST_CASE("mean_psnr_corrected") {
    HviParams params;

    SUBCASE("identical pairs give the infinity sentinel in every space") {
        std::mt19937 rng(17);
        RgbImage img = testsupport::random_image(rng, 16, 16);
        std::vector<std::pair<RgbImage, RgbImage>> pairs;
        pairs.emplace_back(img, img);
        CorrectedPsnr res = mean_psnr_corrected(pairs, params);
        CHECK(std::isinf(res.hsv));
        CHECK(std::isinf(res.pol_only));
        CHECK(std::isinf(res.ck_only));
        CHECK(std::isinf(res.hvi));
    }
    SUBCASE("synthetic noisy pairs order the spaces") {
        std::mt19937 rng(19);
        std::vector<std::pair<RgbImage, RgbImage>> pairs;
        for (int i = 0; i < 3; ++i) pairs.push_back(testsupport::make_corpus_pair(rng, 96, 96));
        CorrectedPsnr res = mean_psnr_corrected(pairs, params);
        CHECK(res.hvi > res.ck_only);
        CHECK(res.ck_only > res.pol_only);
        CHECK(res.pol_only > res.hsv);
    }
    SUBCASE("empty list throws") {
        CHECK_THROWS_AS(mean_psnr_corrected({}, params), std::invalid_argument);
    }
}

TEST_CASE("quality report CSV") {
    QualityReport rep;
    rep.psnr = 20.0;
    rep.ssim = 1.0;
    rep.q = 1.0;
    rep.gt_mean_applied = false;
    CHECK(quality_csv_header() == "path_pred,path_ref,psnr_db,ssim,q,gt_mean_applied");
    CHECK(quality_csv_row("a.png", "b.png", rep) ==
          "a.png,b.png,20.000000,1.000000,1.000000,0");

    rep.psnr = std::numeric_limits<double>::infinity();
    rep.gt_mean_applied = true;
    CHECK(quality_csv_row("x,y.png", "b.png", rep) ==
          "\"x,y.png\",b.png,inf,1.000000,1.000000,1");
}

TEST_CASE("measure bundles the metrics") {
    std::mt19937 rng(23);
    RgbImage ref(16, 16);
    for (size_t i = 0; i < ref.pixels(); ++i) {
        ref.r[i] = static_cast<float>(0.2 + 0.6 * urand(rng));
        ref.g[i] = static_cast<float>(0.2 + 0.6 * urand(rng));
        ref.b[i] = static_cast<float>(0.2 + 0.6 * urand(rng));
    }
    RgbImage pred = ref;
    for (Plane* pl : {&pred.r, &pred.g, &pred.b})
        for (float& v : *pl) v *= 0.5f;

    QualityReport plain = measure(pred, ref, false);
    CHECK(plain.q == doctest::Approx(0.5).epsilon(1e-6));
    CHECK_FALSE(plain.gt_mean_applied);

    QualityReport aligned = measure(pred, ref, true);
    CHECK(aligned.gt_mean_applied);
    CHECK(aligned.psnr > plain.psnr);
    CHECK(aligned.q == doctest::Approx(0.5).epsilon(1e-6));
}
