#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "prospect/image.hpp"
#include "prospect/raster.hpp"

namespace prospect {

struct RenderConfig {
    double opacity = 1.0;  // overlay alpha in (0, 1]
    int scale = 1;         // integer output pixel scale

    void validate() const {
        if (!(opacity > 0.0 && opacity <= 1.0)) throw ConfigError("opacity must be in (0,1]");
        if (scale < 1) throw ConfigError("pixel scale must be >= 1");
    }
};

struct Rgba {
    std::uint8_t r = 0, g = 0, b = 0, a = 0;
    bool operator==(const Rgba&) const = default;
};

// Rainbow colormap on [0,1], cool to warm, as a fixed piecewise-linear table
// so renders are byte-reproducible. Control points:
//   0.00 blue (0,0,255) -> 0.25 cyan (0,255,255) -> 0.50 green (0,255,0)
//   -> 0.75 yellow (255,255,0) -> 1.00 red (255,0,0)
// An input of exactly 0 is fully transparent; everything else is opaque.
inline Rgba colormap_rainbow(double v) {
    if (std::isnan(v) || v < 0.0 || v > 1.0) {
        throw DomainError("colormap input must lie in [0,1]");
    }
    if (v == 0.0) return {0, 0, 0, 0};

    static constexpr std::array<std::array<double, 3>, 5> stops = {{
        {0.0, 0.0, 255.0},
        {0.0, 255.0, 255.0},
        {0.0, 255.0, 0.0},
        {255.0, 255.0, 0.0},
        {255.0, 0.0, 0.0},
    }};
    const double t = v * 4.0;
    const int seg = v >= 1.0 ? 3 : static_cast<int>(t);
    const double f = t - seg;
    auto lerp = [&](int ch) {
        return static_cast<std::uint8_t>(
            std::lround(stops[seg][ch] + f * (stops[seg + 1][ch] - stops[seg][ch])));
    };
    return {lerp(0), lerp(1), lerp(2), 255};
}

// Grayscale render of a [0,1] raster; missing pixels come out black.
inline ImageRgba render_grayscale(const Raster& base) {
    ImageRgba img(base.width(), base.height());
    for (int r = 0; r < base.height(); ++r) {
        for (int c = 0; c < base.width(); ++c) {
            const double v = base.at(r, c);
            const double g = base.is_missing(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
            const auto byte = static_cast<std::uint8_t>(std::lround(g * 255.0));
            std::uint8_t* p = img.px(r, c);
            p[0] = p[1] = p[2] = byte;
            p[3] = 255;
        }
    }
    return img;
}

// Alpha-composites a colormapped overlay onto the grayscale base. The overlay
// must already be normalized to [0,1] by the caller (divide a prospectivity
// map by its scale first). Zero-valued and missing overlay pixels leave the
// base untouched.
inline ImageRgba render_overlay(const Raster& base, const Raster& overlay, const RenderConfig& cfg) {
    cfg.validate();
    if (base.width() != overlay.width() || base.height() != overlay.height()) {
        throw DomainError("render_overlay: base and overlay dimensions differ");
    }
    ImageRgba img = render_grayscale(base);
    for (int r = 0; r < overlay.height(); ++r) {
        for (int c = 0; c < overlay.width(); ++c) {
            const double v = overlay.at(r, c);
            if (overlay.is_missing(v)) continue;
            const Rgba color = colormap_rainbow(std::clamp(v, 0.0, 1.0));
            if (color.a == 0) continue;
            const double alpha = cfg.opacity;
            std::uint8_t* p = img.px(r, c);
            p[0] = static_cast<std::uint8_t>(std::lround((1.0 - alpha) * p[0] + alpha * color.r));
            p[1] = static_cast<std::uint8_t>(std::lround((1.0 - alpha) * p[1] + alpha * color.g));
            p[2] = static_cast<std::uint8_t>(std::lround((1.0 - alpha) * p[2] + alpha * color.b));
            p[3] = 255;
        }
    }
    if (cfg.scale > 1) {
        ImageRgba scaled(img.width * cfg.scale, img.height * cfg.scale);
        for (int r = 0; r < scaled.height; ++r) {
            for (int c = 0; c < scaled.width; ++c) {
                std::memcpy(scaled.px(r, c), img.px(r / cfg.scale, c / cfg.scale), 4);
            }
        }
        return scaled;
    }
    return img;
}

}  // namespace prospect
