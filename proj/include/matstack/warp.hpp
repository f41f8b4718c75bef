#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "matstack/errors.hpp"
#include "matstack/image.hpp"
#include "matstack/vec.hpp"

namespace matstack {

// Row-major 3x3 homography acting on normalized [0,1]^2 coordinates,
// forward convention: a feature at p lands at H*p in the warped image.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return {}; }

    double det() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    Mat3 inverse() const {
        double d = det();
        if (std::abs(d) < 1e-12) throw SpecError("Mat3: singular homography");
        double id = 1.0 / d;
        Mat3 r;
        r.m = {(m[4] * m[8] - m[5] * m[7]) * id, (m[2] * m[7] - m[1] * m[8]) * id,
               (m[1] * m[5] - m[2] * m[4]) * id, (m[5] * m[6] - m[3] * m[8]) * id,
               (m[0] * m[8] - m[2] * m[6]) * id, (m[2] * m[3] - m[0] * m[5]) * id,
               (m[3] * m[7] - m[4] * m[6]) * id, (m[1] * m[6] - m[0] * m[7]) * id,
               (m[0] * m[4] - m[1] * m[3]) * id};
        return r;
    }

    Vec2 apply(Vec2 p) const {
        double w = m[6] * p.x + m[7] * p.y + m[8];
        if (std::abs(w) < 1e-12) throw SpecError("Mat3: point maps to infinity");
        return {(m[0] * p.x + m[1] * p.y + m[2]) / w, (m[3] * p.x + m[4] * p.y + m[5]) / w};
    }

    bool is_identity() const {
        Mat3 id;
        for (int i = 0; i < 9; ++i)
            if (m[i] != id.m[i]) return false;
        return true;
    }
};

// Image of the unit square must be a convex quadrilateral with area >= 0.2.
inline void validate_homography(const Mat3& h) {
    if (std::abs(h.det()) < 1e-12) throw SpecError("homography: zero determinant");
    std::array<Vec2, 4> corners = {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}};
    std::array<Vec2, 4> img;
    for (int i = 0; i < 4; ++i) img[i] = h.apply(corners[i]);

    double area2 = 0;
    int sign = 0;
    for (int i = 0; i < 4; ++i) {
        Vec2 a = img[i], b = img[(i + 1) % 4], c = img[(i + 2) % 4];
        double cr = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        int s = cr > 0 ? 1 : (cr < 0 ? -1 : 0);
        if (s == 0) throw SpecError("homography: degenerate quadrilateral");
        if (sign == 0) sign = s;
        else if (s != sign) throw SpecError("homography: non-convex image of unit square");
        area2 += a.x * b.y - b.x * a.y;
    }
    if (std::abs(area2) * 0.5 < 0.2) throw SpecError("homography: image area below 0.2");
}

// Thin plate spline displacement field fitted on (source, target) control
// pairs in normalized coordinates: a feature at source_i appears at
// target_i. Sampling uses the backward field d(p) fitted at the targets
// with values source_i - target_i, kernel U(r) = r^2 log r, ridge 1e-6.
class ThinPlateSpline {
public:
    ThinPlateSpline() = default;

    explicit ThinPlateSpline(const std::vector<std::pair<Vec2, Vec2>>& points) {
        if (points.empty()) return;
        const int n = static_cast<int>(points.size());
        centers_.reserve(n);
        for (const auto& [src, dst] : points) centers_.push_back(dst);

        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 3, n + 3);
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + 3, 2);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) A(i, j) = kernel(centers_[i], centers_[j]);
            A(i, i) += 1e-6;
            A(i, n) = 1.0;
            A(i, n + 1) = centers_[i].x;
            A(i, n + 2) = centers_[i].y;
            A(n, i) = 1.0;
            A(n + 1, i) = centers_[i].x;
            A(n + 2, i) = centers_[i].y;
            rhs(i, 0) = points[i].first.x - points[i].second.x;
            rhs(i, 1) = points[i].first.y - points[i].second.y;
        }
        Eigen::MatrixXd sol = A.fullPivLu().solve(rhs);
        wx_.assign(n + 3, 0.0);
        wy_.assign(n + 3, 0.0);
        for (int i = 0; i < n + 3; ++i) {
            wx_[i] = sol(i, 0);
            wy_[i] = sol(i, 1);
        }
    }

    bool empty() const { return centers_.empty(); }

    // Backward displacement: where to sample the source for output point p.
    Vec2 displacement(Vec2 p) const {
        if (centers_.empty()) return {0, 0};
        const int n = static_cast<int>(centers_.size());
        double dx = wx_[n] + wx_[n + 1] * p.x + wx_[n + 2] * p.y;
        double dy = wy_[n] + wy_[n + 1] * p.x + wy_[n + 2] * p.y;
        for (int i = 0; i < n; ++i) {
            double u = kernel(p, centers_[i]);
            dx += wx_[i] * u;
            dy += wy_[i] * u;
        }
        return {dx, dy};
    }

    static double kernel(Vec2 a, Vec2 b) {
        double r2 = dot(a - b, a - b);
        return r2 > 0 ? r2 * std::log(std::sqrt(r2)) : 0.0;
    }

private:
    std::vector<Vec2> centers_;
    std::vector<double> wx_, wy_;
};

struct DistortionSpec {
    Mat3 homography;
    std::vector<std::pair<Vec2, Vec2>> tps_points;

    void validate() const {
        validate_homography(homography);
        for (const auto& [src, dst] : tps_points)
            if (norm(dst - src) > 0.15 + 1e-12)
                throw SpecError("tps: displacement magnitude above 0.15");
    }

    bool is_identity() const { return homography.is_identity() && tps_points.empty(); }
};

inline Vec2 pixel_to_norm(double x, double y, int w, int h) {
    return {(x + 0.5) / w, (y + 0.5) / h};
}

inline Image warp_homography(const Image& in, const Mat3& h) {
    if (h.is_identity()) return in;
    Mat3 inv = h.inverse();
    Image out(in.width, in.height, in.channels);
    for (int y = 0; y < in.height; ++y)
        for (int x = 0; x < in.width; ++x) {
            Vec2 q = inv.apply(pixel_to_norm(x, y, in.width, in.height));
            double u = q.x * in.width, v = q.y * in.height;
            for (int c = 0; c < in.channels; ++c)
                out.at(x, y, c) = in.sample(u, v, c, Address::Clamp);
        }
    return out;
}

inline Image warp_tps(const Image& in, const ThinPlateSpline& tps) {
    if (tps.empty()) return in;
    Image out(in.width, in.height, in.channels);
    for (int y = 0; y < in.height; ++y)
        for (int x = 0; x < in.width; ++x) {
            Vec2 p = pixel_to_norm(x, y, in.width, in.height);
            Vec2 q = p + tps.displacement(p);
            double u = q.x * in.width, v = q.y * in.height;
            for (int c = 0; c < in.channels; ++c)
                out.at(x, y, c) = in.sample(u, v, c, Address::Clamp);
        }
    return out;
}

// Homography first, then TPS, matching the dataset construction order.
inline Image apply_distortion(const Image& in, const DistortionSpec& spec) {
    Image mid = warp_homography(in, spec.homography);
    return warp_tps(mid, ThinPlateSpline(spec.tps_points));
}

} // namespace matstack
