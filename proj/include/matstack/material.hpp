#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "matstack/errors.hpp"
#include "matstack/image.hpp"
#include "matstack/vec.hpp"

namespace matstack {

// Tangent-space normal codec, c = (n + 1) / 2. Stored y-up, +z out of the
// surface; decode clamps z to be non-negative and renormalizes.
inline std::array<float, 3> encode_normal(Vec3 n) {
    if (!std::isfinite(n.x) || !std::isfinite(n.y) || !std::isfinite(n.z))
        throw ValueError("encode_normal: non-finite normal");
    double len = norm(n);
    if (std::abs(len - 1.0) > 1e-6) throw ValueError("encode_normal: input not unit length");
    if (n.z <= 0.0) throw ValueError("encode_normal: z must be positive");
    return {static_cast<float>((n.x + 1.0) * 0.5), static_cast<float>((n.y + 1.0) * 0.5),
            static_cast<float>((n.z + 1.0) * 0.5)};
}

inline Vec3 decode_normal(float r, float g, float b) {
    if (!std::isfinite(r) || !std::isfinite(g) || !std::isfinite(b))
        throw ValueError("decode_normal: non-finite rgb");
    Vec3 v{2.0 * r - 1.0, 2.0 * g - 1.0, 2.0 * b - 1.0};
    v.z = std::max(v.z, 0.0);
    if (norm(v) < 1e-8) return {0, 0, 1};
    return normalized(v);
}

// The five SVBRDF channels at one square resolution. Albedo is linear RGB,
// normals are codec-encoded RGB, the scalar maps are single channel.
struct MaterialMaps {
    Image albedo;     // 3ch linear
    Image normal;     // 3ch encoded
    Image roughness;  // 1ch
    Image height;     // 1ch
    Image metallic;   // 1ch

    int resolution() const { return albedo.width; }

    void validate() const {
        int r = albedo.width;
        auto check = [&](const Image& m, int ch, const char* name) {
            if (m.width != r || m.height != r || m.channels != ch)
                throw DimensionError(std::string("MaterialMaps: bad shape for ") + name);
            for (float v : m.data)
                if (!std::isfinite(v) || v < 0.0f || v > 1.0f)
                    throw ValueError(std::string("MaterialMaps: value out of [0,1] in ") + name);
        };
        if (r <= 0) throw DimensionError("MaterialMaps: empty albedo");
        check(albedo, 3, "albedo");
        check(normal, 3, "normal");
        check(roughness, 1, "roughness");
        check(height, 1, "height");
        check(metallic, 1, "metallic");
        for (int y = 0; y < r; ++y)
            for (int x = 0; x < r; ++x) {
                Vec3 v{2.0 * normal.at(x, y, 0) - 1.0, 2.0 * normal.at(x, y, 1) - 1.0,
                       2.0 * normal.at(x, y, 2) - 1.0};
                double len = norm(v);
                if (len < 1.0 - 1e-2 || len > 1.0 + 1e-2)
                    throw ValueError("MaterialMaps: decoded normal not unit length");
            }
    }
};

struct MaterialMask {
    Image values;  // 1ch, [0,1]

    int resolution() const { return values.width; }
};

struct Prompt {
    std::string text;
};

enum class StackMode { ImageCond, TextOnly, MaskInputAblation };

inline const char* to_string(StackMode m) {
    switch (m) {
        case StackMode::ImageCond: return "image";
        case StackMode::TextOnly: return "text";
        case StackMode::MaskInputAblation: return "mask_input";
    }
    return "?";
}

inline StackMode stack_mode_from_string(const std::string& s) {
    if (s == "image") return StackMode::ImageCond;
    if (s == "text") return StackMode::TextOnly;
    if (s == "mask_input") return StackMode::MaskInputAblation;
    throw ConfigError("unknown mode: " + s);
}

inline int frame_count(StackMode m) { return m == StackMode::TextOnly ? 6 : 7; }

// Frames the diffusion process actually generates (and the loss covers).
inline int generated_frame_count(StackMode m) {
    switch (m) {
        case StackMode::ImageCond: return 6;
        case StackMode::TextOnly: return 6;
        case StackMode::MaskInputAblation: return 5;
    }
    return 0;
}

inline std::vector<std::uint8_t> clean_flags_for(StackMode m) {
    switch (m) {
        case StackMode::ImageCond: return {1, 0, 0, 0, 0, 0, 0};
        case StackMode::TextOnly: return {0, 0, 0, 0, 0, 0};
        case StackMode::MaskInputAblation: return {1, 1, 0, 0, 0, 0, 0};
    }
    return {};
}

// The diffusion "video": frame order is [image?, mask, albedo, normal,
// roughness, height, metallic]; clean-flagged frames are conditioning and
// are never noised.
struct FrameStack {
    std::vector<Image> frames;
    std::vector<std::uint8_t> clean_flags;
    StackMode mode = StackMode::ImageCond;

    int resolution() const { return frames.empty() ? 0 : frames[0].width; }

    void validate() const {
        if (static_cast<int>(frames.size()) != frame_count(mode) ||
            clean_flags != clean_flags_for(mode))
            throw StructureError("FrameStack: frame count / flags inconsistent with mode");
        for (const Image& f : frames)
            if (f.channels != 3 || f.width != frames[0].width || f.height != f.width ||
                f.height != frames[0].height)
                throw StructureError("FrameStack: frames must be square RGB of equal size");
    }
};

inline Image replicate3(const Image& gray) {
    Image out(gray.width, gray.height, 3);
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x) {
            float v = gray.at(x, y, 0);
            out.at(x, y, 0) = v;
            out.at(x, y, 1) = v;
            out.at(x, y, 2) = v;
        }
    return out;
}

// Channel mean with an exact-equality shortcut so that replicate3 followed
// by collapse3 round-trips bit-identically.
inline Image collapse3(const Image& rgb) {
    Image out(rgb.width, rgb.height, 1);
    for (int y = 0; y < rgb.height; ++y)
        for (int x = 0; x < rgb.width; ++x) {
            float a = rgb.at(x, y, 0), b = rgb.at(x, y, 1), c = rgb.at(x, y, 2);
            float v = (a == b && b == c) ? a : (a + b + c) / 3.0f;
            out.at(x, y, 0) = clamp01(v);
        }
    return out;
}

inline FrameStack pack_frames(const MaterialMaps& maps, const MaterialMask& mask,
                              const std::optional<Image>& image, StackMode mode) {
    int r = maps.resolution();
    if (mode == StackMode::TextOnly) {
        if (image.has_value()) throw ModeError("pack_frames: image supplied in TextOnly mode");
    } else {
        if (!image.has_value()) throw ModeError("pack_frames: image required for this mode");
        if (image->width != r || image->height != r || image->channels != 3)
            throw DimensionError("pack_frames: image resolution mismatch");
        if (mask.values.width != r || mask.values.height != r || mask.values.channels != 1)
            throw DimensionError("pack_frames: mask resolution mismatch");
    }
    if (maps.normal.width != r || maps.roughness.width != r || maps.height.width != r ||
        maps.metallic.width != r)
        throw DimensionError("pack_frames: map resolution mismatch");

    FrameStack stack;
    stack.mode = mode;
    stack.clean_flags = clean_flags_for(mode);
    if (mode != StackMode::TextOnly) stack.frames.push_back(*image);
    if (mode == StackMode::TextOnly)
        stack.frames.push_back(Image(r, r, 3, 1.0f));  // white placeholder mask
    else
        stack.frames.push_back(replicate3(mask.values));
    stack.frames.push_back(maps.albedo);
    stack.frames.push_back(maps.normal);
    stack.frames.push_back(replicate3(maps.roughness));
    stack.frames.push_back(replicate3(maps.height));
    stack.frames.push_back(replicate3(maps.metallic));
    return stack;
}

struct UnpackedStack {
    MaterialMaps maps;
    MaterialMask mask;
    std::optional<Image> image;
};

inline UnpackedStack unpack_frames(const FrameStack& stack) {
    stack.validate();
    UnpackedStack out;
    int base = 0;
    if (stack.mode != StackMode::TextOnly) {
        out.image = stack.frames[0];
        base = 1;
    }
    out.mask.values = collapse3(stack.frames[base + 0]);
    out.maps.albedo = clamp_image(stack.frames[base + 1]);
    out.maps.normal = clamp_image(stack.frames[base + 2]);
    out.maps.roughness = collapse3(stack.frames[base + 3]);
    out.maps.height = collapse3(stack.frames[base + 4]);
    out.maps.metallic = collapse3(stack.frames[base + 5]);
    return out;
}

} // namespace matstack
