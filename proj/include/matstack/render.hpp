#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "matstack/brdf.hpp"
#include "matstack/errors.hpp"
#include "matstack/image.hpp"
#include "matstack/material.hpp"
#include "matstack/rng.hpp"
#include "matstack/vec.hpp"

namespace matstack {

struct Light {
    enum class Kind { Point, Area, Ambient };
    Kind kind = Kind::Point;
    Vec3 position{0, 0, 1};       // point
    Vec3 area_origin{0, 0, 1};    // area rectangle corner
    Vec3 area_edge_u{0.2, 0, 0};  // area rectangle edges
    Vec3 area_edge_v{0, 0.2, 0};
    Vec3 intensity{1, 1, 1};      // radiance for area, intensity for point, flat for ambient

    void validate() const {
        if (intensity.x < 0 || intensity.y < 0 || intensity.z < 0)
            throw ValueError("Light: negative intensity");
    }
};

struct Camera {
    Vec3 position{0.5, 0.5, 1.2};
    Vec3 look_at{0.5, 0.5, 0.0};
    Vec3 up{0, 1, 0};
    double vfov_deg = 45.0;
    int resolution = 128;

    void validate() const {
        if (vfov_deg <= 10.0 || vfov_deg >= 120.0) throw ValueError("Camera: fov out of range");
        Vec3 fwd = look_at - position;
        if (norm(fwd) < 1e-9 || norm(cross(fwd, up)) < 1e-9)
            throw ValueError("Camera: degenerate pose");
        if (resolution <= 0) throw ValueError("Camera: bad resolution");
    }
};

// World-space rectangle with UV mapping; the texture tiles uv_repeat times
// across each edge.
struct PlaneSpec {
    Vec3 origin{0, 0, 0};
    Vec3 edge_u{1, 0, 0};
    Vec3 edge_v{0, 1, 0};
    double uv_repeat = 1.0;
};

struct RenderResult {
    Image rgb;     // sRGB-encoded, clamped
    Image linear;  // pre-tonemap radiance
    Image uv;      // 3ch: map texel u, map texel v, hit flag
};

namespace detail {

struct Frame {
    Vec3 t, b, n;

    Vec3 to_local(Vec3 w) const { return {dot(w, t), dot(w, b), dot(w, n)}; }
};

inline Frame make_frame(Vec3 n, Vec3 t_hint) {
    Vec3 t = normalized(t_hint - dot(t_hint, n) * n);
    if (norm(t) < 1e-9) t = normalized(cross(n, Vec3{0, 0, 1}));
    return {t, cross(n, t), n};
}

} // namespace detail

// Per-pixel plane rendering: intersect, sample maps bilinearly (wrap),
// shade with the BRDF summed over lights (area lights via 16 stratified
// samples), plus ambient * albedo. Deterministic given (maps, camera,
// lights, seed): per-pixel RNG streams are derived from (seed, pixel).
inline RenderResult render_plane(const MaterialMaps& maps, const Camera& camera,
                                 const std::vector<Light>& lights, const PlaneSpec& plane,
                                 std::uint64_t seed = 0) {
    camera.validate();
    for (const Light& l : lights) l.validate();

    const int res = camera.resolution;
    const int rmap = maps.resolution();
    RenderResult out;
    out.rgb = Image(res, res, 3);
    out.linear = Image(res, res, 3);
    out.uv = Image(res, res, 3);

    Vec3 fwd = normalized(camera.look_at - camera.position);
    Vec3 right = normalized(cross(fwd, camera.up));
    Vec3 cup = cross(right, fwd);
    double tan_half = std::tan(camera.vfov_deg * std::numbers::pi / 360.0);

    Vec3 pn = normalized(cross(plane.edge_u, plane.edge_v));
    double lu2 = dot(plane.edge_u, plane.edge_u);
    double lv2 = dot(plane.edge_v, plane.edge_v);

    // Geometric tangent frame of the plane; shading normals perturb it.
    Vec3 gt = normalized(plane.edge_u);
    int hits = 0;

    for (int y = 0; y < res; ++y) {
        for (int x = 0; x < res; ++x) {
            double px = (2.0 * (x + 0.5) / res - 1.0) * tan_half;
            double py = (1.0 - 2.0 * (y + 0.5) / res) * tan_half;
            Vec3 dir = normalized(fwd + px * right + py * cup);

            double denom = dot(dir, pn);
            if (std::abs(denom) < 1e-12) continue;
            double tdist = dot(plane.origin - camera.position, pn) / denom;
            if (tdist <= 0) continue;
            Vec3 p = camera.position + tdist * dir;
            Vec3 rel = p - plane.origin;
            double a = dot(rel, plane.edge_u) / lu2;
            double b = dot(rel, plane.edge_v) / lv2;
            if (a < 0 || a > 1 || b < 0 || b > 1) continue;
            // Only the front face is visible; a camera behind the plane
            // sees nothing and triggers the empty-visibility error.
            if (dot(camera.position - p, pn) <= 0) continue;
            ++hits;

            double tu = a * plane.uv_repeat * rmap;
            double tv = b * plane.uv_repeat * rmap;
            out.uv.at(x, y, 0) = static_cast<float>(tu);
            out.uv.at(x, y, 1) = static_cast<float>(tv);
            out.uv.at(x, y, 2) = 1.0f;

            ShadePoint sp;
            sp.albedo = {maps.albedo.sample(tu, tv, 0, Address::Wrap),
                         maps.albedo.sample(tu, tv, 1, Address::Wrap),
                         maps.albedo.sample(tu, tv, 2, Address::Wrap)};
            sp.roughness = maps.roughness.sample(tu, tv, 0, Address::Wrap);
            sp.metallic = maps.metallic.sample(tu, tv, 0, Address::Wrap);
            Vec3 nt = decode_normal(maps.normal.sample(tu, tv, 0, Address::Wrap),
                                    maps.normal.sample(tu, tv, 1, Address::Wrap),
                                    maps.normal.sample(tu, tv, 2, Address::Wrap));
            Vec3 ns = normalized(nt.x * gt + nt.y * cross(pn, gt) + nt.z * pn);
            detail::Frame frame = detail::make_frame(ns, gt);

            Vec3 wo_w = normalized(camera.position - p);
            Vec3 wo = frame.to_local(wo_w);
            Vec3 lo{0, 0, 0};
            Pcg32 rng(derive_seed(seed, {static_cast<std::uint64_t>(y) * res + x}));

            for (const Light& light : lights) {
                switch (light.kind) {
                    case Light::Kind::Ambient:
                        lo = lo + light.intensity * sp.albedo;
                        break;
                    case Light::Kind::Point: {
                        Vec3 d = light.position - p;
                        double r2 = dot(d, d);
                        if (r2 < 1e-12) break;
                        Vec3 wi = frame.to_local(normalized(d));
                        if (wi.z <= 0 || wo.z <= 0) break;
                        Vec3 f = eval_brdf(wi, wo, sp);
                        lo = lo + (wi.z / r2) * (f * light.intensity);
                        break;
                    }
                    case Light::Kind::Area: {
                        Vec3 ln = cross(light.area_edge_u, light.area_edge_v);
                        double area = norm(ln);
                        if (area < 1e-12) break;
                        ln = (1.0 / area) * ln;
                        Vec3 acc{0, 0, 0};
                        const int grid = 4;  // 16 stratified samples
                        for (int j = 0; j < grid; ++j)
                            for (int i = 0; i < grid; ++i) {
                                double sa = (i + rng.uniform()) / grid;
                                double sb = (j + rng.uniform()) / grid;
                                Vec3 q = light.area_origin + sa * light.area_edge_u +
                                         sb * light.area_edge_v;
                                Vec3 d = q - p;
                                double r2 = dot(d, d);
                                if (r2 < 1e-12) continue;
                                Vec3 wiw = (1.0 / std::sqrt(r2)) * d;
                                double cos_l = std::abs(dot(ln, wiw));
                                Vec3 wi = frame.to_local(wiw);
                                if (wi.z <= 0 || wo.z <= 0) continue;
                                Vec3 f = eval_brdf(wi, wo, sp);
                                acc = acc + (wi.z * cos_l / r2) * f;
                            }
                        lo = lo + (area / (grid * grid)) * (acc * light.intensity);
                        break;
                    }
                }
            }

            out.linear.at(x, y, 0) = static_cast<float>(lo.x);
            out.linear.at(x, y, 1) = static_cast<float>(lo.y);
            out.linear.at(x, y, 2) = static_cast<float>(lo.z);
            for (int c = 0; c < 3; ++c)
                out.rgb.at(x, y, c) = srgb_encode(out.linear.at(x, y, c));
        }
    }
    if (hits == 0) throw VisibilityError("render_plane: plane not visible from camera");
    return out;
}

// Fixed fronto-parallel preview rig: key + fill point lights and a small
// ambient floor. Deterministic for a given seed.
inline Image relight_preview(const MaterialMaps& maps, std::uint64_t seed = 0, int resolution = 0) {
    Camera cam;
    cam.position = {0.5, 0.5, 1.2};
    cam.look_at = {0.5, 0.5, 0.0};
    cam.resolution = resolution > 0 ? resolution : maps.resolution();

    std::vector<Light> rig;
    Light key;
    key.kind = Light::Kind::Point;
    key.position = {0.78, 0.66, 0.85};
    key.intensity = {1.3, 1.3, 1.3};
    rig.push_back(key);
    Light fill;
    fill.kind = Light::Kind::Point;
    fill.position = {0.25, 0.35, 1.05};
    fill.intensity = {0.5, 0.5, 0.5};
    rig.push_back(fill);
    Light amb;
    amb.kind = Light::Kind::Ambient;
    amb.intensity = {0.12, 0.12, 0.12};
    rig.push_back(amb);

    return render_plane(maps, cam, rig, PlaneSpec{}, seed).rgb;
}

} // namespace matstack
