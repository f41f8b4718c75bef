#include <catch2/catch_amalgamated.hpp>

#include "matstack/rng.hpp"
#include "matstack/warp.hpp"

using namespace matstack;

namespace {

Image checker_image(int r, int period) {
    Image img(r, r, 3);
    for (int y = 0; y < r; ++y)
        for (int x = 0; x < r; ++x) {
            int cell = ((x / (period / 2)) + (y / (period / 2))) % 2;
            float v = cell ? 1.0f : 0.0f;
            img.at(x, y, 0) = v;
            img.at(x, y, 1) = v;
            img.at(x, y, 2) = v;
        }
    return img;
}

// Dominant non-zero autocorrelation lag of the row-averaged signal.
int autocorr_period_x(const Image& img) {
    int w = img.width;
    std::vector<double> sig(w, 0.0);
    for (int x = 0; x < w; ++x) {
        double s = 0;
        for (int y = 0; y < img.height; ++y) s += img.at(x, y, 0);
        sig[x] = s / img.height;
    }
    double mean = 0;
    for (double v : sig) mean += v;
    mean /= w;
    for (double& v : sig) v -= mean;
    int best_lag = 0;
    double best = -1e30;
    for (int lag = 2; lag <= w / 2; ++lag) {
        double acc = 0;
        for (int x = 0; x < w; ++x) acc += sig[x] * sig[(x + lag) % w];
        if (acc > best) {
            best = acc;
            best_lag = lag;
        }
    }
    return best_lag;
}

} // namespace

TEST_CASE("identity distortion returns the input bit-exactly") {
    Pcg32 rng(1);
    Image img(16, 16, 3);
    for (float& v : img.data) v = static_cast<float>(rng.uniform());
    DistortionSpec spec;
    spec.validate();
    Image out = apply_distortion(img, spec);
    REQUIRE(out.data == img.data);
}

TEST_CASE("homography inverse round-trips points") {
    Mat3 h;
    h.m = {0.9, 0.1, 0.02, -0.05, 1.1, 0.01, 0.1, -0.08, 1.0};
    Mat3 inv = h.inverse();
    Pcg32 rng(3);
    for (int i = 0; i < 100; ++i) {
        Vec2 p{rng.uniform(), rng.uniform()};
        Vec2 q = inv.apply(h.apply(p));
        REQUIRE(q.x == Catch::Approx(p.x).margin(1e-9));
        REQUIRE(q.y == Catch::Approx(p.y).margin(1e-9));
    }
}

TEST_CASE("pure scale homography halves the checker period") {
    Image img = checker_image(64, 16);
    REQUIRE(autocorr_period_x(img) == 16);
    Mat3 h;
    h.m = {0.5, 0, 0, 0, 0.5, 0, 0, 0, 1};
    Image warped = warp_homography(img, h);
    REQUIRE(autocorr_period_x(warped) == 8);
}

TEST_CASE("homography validation rejects bad specs") {
    Mat3 singular;
    singular.m = {1, 0, 0, 2, 0, 0, 0, 0, 1};
    REQUIRE_THROWS_AS(validate_homography(singular), SpecError);

    Mat3 tiny;
    tiny.m = {0.1, 0, 0, 0, 0.1, 0, 0, 0, 1};  // area 0.01 < 0.2
    REQUIRE_THROWS_AS(validate_homography(tiny), SpecError);

    Mat3 ok;
    ok.m = {0.8, 0.1, 0.05, -0.1, 0.9, 0.02, 0.05, 0.02, 1};
    REQUIRE_NOTHROW(validate_homography(ok));
}

TEST_CASE("tps interpolates displacements exactly at control points") {
    std::vector<std::pair<Vec2, Vec2>> pts = {
        {{0, 0}, {0, 0}},
        {{1, 0}, {1, 0}},
        {{1, 1}, {1, 1}},
        {{0, 1}, {0, 1}},
        {{0.5, 0.5}, {0.55, 0.45}},
    };
    ThinPlateSpline tps(pts);
    for (const auto& [src, dst] : pts) {
        Vec2 d = tps.displacement(dst);
        // backward field: sampling position for output point dst is src
        REQUIRE(d.x == Catch::Approx(src.x - dst.x).margin(2e-4));
        REQUIRE(d.y == Catch::Approx(src.y - dst.y).margin(2e-4));
    }
}

TEST_CASE("tps with zero displacements is near identity") {
    std::vector<std::pair<Vec2, Vec2>> pts = {
        {{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{1, 1}, {1, 1}}, {{0, 1}, {0, 1}}};
    ThinPlateSpline tps(pts);
    Pcg32 rng(5);
    for (int i = 0; i < 50; ++i) {
        Vec2 p{rng.uniform(), rng.uniform()};
        Vec2 d = tps.displacement(p);
        REQUIRE(std::abs(d.x) < 1e-6);
        REQUIRE(std::abs(d.y) < 1e-6);
    }
}

TEST_CASE("distortion spec validates tps displacement bound") {
    DistortionSpec spec;
    spec.tps_points = {{{0.5, 0.5}, {0.9, 0.9}}};  // |d| ~ 0.57
    REQUIRE_THROWS_AS(spec.validate(), SpecError);
    spec.tps_points = {{{0.5, 0.5}, {0.58, 0.55}}};
    REQUIRE_NOTHROW(spec.validate());
}

TEST_CASE("warp then inverse homography re-aligns content within a pixel") {
    Image img = checker_image(64, 16);
    Mat3 h;
    h.m = {0.85, 0.08, 0.03, -0.06, 0.9, 0.05, 0.02, 0.01, 1};
    validate_homography(h);
    Image warped = warp_homography(img, h);
    Image back = warp_homography(warped, h.inverse());
    // Compare away from the border where clamp fill bleeds in.
    double diff = 0;
    int n = 0;
    for (int y = 8; y < 56; ++y)
        for (int x = 8; x < 56; ++x) {
            diff += std::abs(back.at(x, y, 0) - img.at(x, y, 0));
            ++n;
        }
    REQUIRE(diff / n < 0.08);  // residual bilinear blur along cell edges
}
