#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "matstack/errors.hpp"

namespace matstack {

inline float clamp01(float v) { return std::min(1.0f, std::max(0.0f, v)); }

inline float srgb_encode(float u) {
    u = clamp01(u);
    return u <= 0.0031308f ? 12.92f * u : 1.055f * std::pow(u, 1.0f / 2.4f) - 0.055f;
}

inline float srgb_decode(float u) {
    u = clamp01(u);
    return u <= 0.04045f ? u / 12.92f : std::pow((u + 0.055f) / 1.055f, 2.4f);
}

enum class Address { Clamp, Wrap };

// Row-major interleaved float image, 1 or 3 channels, values nominally [0,1].
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<float> data;

    Image() = default;
    Image(int w, int h, int c, float fill = 0.0f)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, fill) {}

    float& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    float at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }

    bool empty() const { return data.empty(); }

    // Texel fetch with addressing mode.
    float fetch(int x, int y, int c, Address mode) const {
        if (mode == Address::Wrap) {
            x = ((x % width) + width) % width;
            y = ((y % height) + height) % height;
        } else {
            x = std::clamp(x, 0, width - 1);
            y = std::clamp(y, 0, height - 1);
        }
        return at(x, y, c);
    }

    // Bilinear sample; (u, v) in pixel units, texel centers at half-integers.
    float sample(double u, double v, int c, Address mode) const {
        double fx = u - 0.5, fy = v - 0.5;
        int x0 = static_cast<int>(std::floor(fx));
        int y0 = static_cast<int>(std::floor(fy));
        double ax = fx - x0, ay = fy - y0;
        double v00 = fetch(x0, y0, c, mode), v10 = fetch(x0 + 1, y0, c, mode);
        double v01 = fetch(x0, y0 + 1, c, mode), v11 = fetch(x0 + 1, y0 + 1, c, mode);
        return static_cast<float>((v00 * (1 - ax) + v10 * ax) * (1 - ay) +
                                  (v01 * (1 - ax) + v11 * ax) * ay);
    }

    bool finite() const {
        for (float v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline Image map_channels(const Image& in, float (*f)(float)) {
    Image out = in;
    for (float& v : out.data) v = f(v);
    return out;
}

inline Image to_srgb(const Image& linear) { return map_channels(linear, srgb_encode); }
inline Image to_linear(const Image& srgb) { return map_channels(srgb, srgb_decode); }

inline Image clamp_image(const Image& in) { return map_channels(in, clamp01); }

// Mean over all pixels of one channel.
inline double channel_mean(const Image& img, int c) {
    double s = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) s += img.at(x, y, c);
    return s / (static_cast<double>(img.width) * img.height);
}

inline double cubic_kernel(double t) {
    // Catmull-Rom (a = -0.5)
    constexpr double a = -0.5;
    t = std::abs(t);
    if (t < 1.0) return ((a + 2) * t - (a + 3)) * t * t + 1;
    if (t < 2.0) return ((a * t - 5 * a) * t + 8 * a) * t - 4 * a;
    return 0.0;
}

// Bicubic resize to (out_w, out_h); clamp addressing at borders.
inline Image resize_bicubic(const Image& in, int out_w, int out_h) {
    if (in.empty()) throw DimensionError("resize_bicubic: empty image");
    Image out(out_w, out_h, in.channels);
    double sx = static_cast<double>(in.width) / out_w;
    double sy = static_cast<double>(in.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        double v = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(v));
        for (int x = 0; x < out_w; ++x) {
            double u = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(u));
            for (int c = 0; c < in.channels; ++c) {
                double acc = 0, wsum = 0;
                for (int j = -1; j <= 2; ++j) {
                    double wy = cubic_kernel(v - (y0 + j));
                    for (int i = -1; i <= 2; ++i) {
                        double w = cubic_kernel(u - (x0 + i)) * wy;
                        acc += w * in.fetch(x0 + i, y0 + j, c, Address::Clamp);
                        wsum += w;
                    }
                }
                out.at(x, y, c) = clamp01(static_cast<float>(acc / wsum));
            }
        }
    }
    return out;
}

// Cyclic shift by (dx, dy): output(x, y) = input((x - dx) mod W, (y - dy) mod H).
inline Image roll_image(const Image& in, int dx, int dy) {
    Image out(in.width, in.height, in.channels);
    int w = in.width, h = in.height;
    dx = ((dx % w) + w) % w;
    dy = ((dy % h) + h) % h;
    for (int y = 0; y < h; ++y) {
        int sy = (y - dy + h) % h;
        for (int x = 0; x < w; ++x) {
            int sx = (x - dx + w) % w;
            for (int c = 0; c < in.channels; ++c) out.at(x, y, c) = in.at(sx, sy, c);
        }
    }
    return out;
}

} // namespace matstack
