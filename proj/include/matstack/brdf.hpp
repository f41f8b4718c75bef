#pragma once

#include <cmath>
#include <numbers>

#include "matstack/errors.hpp"
#include "matstack/vec.hpp"

namespace matstack {

// Per-texel slice of the metallic/roughness material model. Roughness is
// perceptual; the microfacet alpha is roughness^2.
struct ShadePoint {
    Vec3 albedo{0.5, 0.5, 0.5};
    double metallic = 0.0;
    double roughness = 0.5;
    Vec3 normal{0, 0, 1};
};

inline double ggx_alpha(double roughness) {
    return std::max(roughness * roughness, 1e-4);
}

// GGX normal distribution, ndh = cos of the half-vector angle.
inline double ggx_ndf(double ndh, double alpha) {
    double a2 = alpha * alpha;
    double d = ndh * ndh * (a2 - 1.0) + 1.0;
    return a2 / (std::numbers::pi * d * d);
}

inline double smith_lambda(double mu, double alpha) {
    double a2 = alpha * alpha;
    return (-mu + std::sqrt(a2 + (1.0 - a2) * mu * mu)) / (2.0 * mu);
}

// Height-correlated Smith masking-shadowing. Cosines are sorted so the
// expression is bitwise symmetric in (wi, wo).
inline double smith_g2(double cos_i, double cos_o, double alpha) {
    double lo = std::min(cos_i, cos_o);
    double hi = std::max(cos_i, cos_o);
    return 1.0 / (1.0 + smith_lambda(lo, alpha) + smith_lambda(hi, alpha));
}

inline double schlick(double f0, double cos_d) {
    double m = 1.0 - cos_d;
    double m2 = m * m;
    return f0 + (1.0 - f0) * m2 * m2 * m;
}

// Disney-subset BRDF in the shading frame (n = +z):
//   f = (1 - metallic) * albedo / pi + D * G * F / (4 (n.wi)(n.wo))
// with F0 = mix(0.04, albedo, metallic). Back-facing directions yield zero.
inline Vec3 eval_brdf(Vec3 wi, Vec3 wo, const ShadePoint& p) {
    if (!std::isfinite(p.albedo.x) || !std::isfinite(p.albedo.y) || !std::isfinite(p.albedo.z) ||
        !std::isfinite(p.metallic) || !std::isfinite(p.roughness))
        throw ValueError("eval_brdf: non-finite shading parameters");
    if (!std::isfinite(wi.x + wi.y + wi.z) || !std::isfinite(wo.x + wo.y + wo.z))
        throw ValueError("eval_brdf: non-finite direction");

    double cos_i = wi.z, cos_o = wo.z;
    if (cos_i <= 0.0 || cos_o <= 0.0) return {0, 0, 0};

    double alpha = ggx_alpha(p.roughness);

    // Half-vector quantities from symmetric expressions: |wi+wo| and
    // wi.wo are invariant under swapping, so reciprocity is exact.
    Vec3 s = wi + wo;
    double slen = norm(s);
    if (slen < 1e-12) return {0, 0, 0};
    double ndh = s.z / slen;
    double cos_d = (1.0 + dot(wi, wo)) / slen;

    double d = ggx_ndf(ndh, alpha);
    double g = smith_g2(cos_i, cos_o, alpha);
    double spec_scale = d * g / (4.0 * cos_i * cos_o);

    double diff_scale = (1.0 - p.metallic) / std::numbers::pi;
    auto channel = [&](double a) {
        double f0 = 0.04 * (1.0 - p.metallic) + a * p.metallic;
        return diff_scale * a + spec_scale * schlick(f0, cos_d);
    };
    return {channel(p.albedo.x), channel(p.albedo.y), channel(p.albedo.z)};
}

// Sample a GGX half-vector (pdf = D(h) * (n.h)); used for low-variance
// furnace-style integration. u1, u2 are uniform in [0,1).
inline Vec3 sample_ggx_half(double alpha, double u1, double u2) {
    double a2 = alpha * alpha;
    double cos2 = (1.0 - u1) / (1.0 + (a2 - 1.0) * u1);
    double cos_t = std::sqrt(std::max(cos2, 0.0));
    double sin_t = std::sqrt(std::max(1.0 - cos2, 0.0));
    double phi = 2.0 * std::numbers::pi * u2;
    return {sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t};
}

inline Vec3 reflect_about(Vec3 w, Vec3 h) { return 2.0 * dot(w, h) * h - w; }

} // namespace matstack
