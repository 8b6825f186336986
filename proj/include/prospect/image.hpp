#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <zlib.h>

#include "prospect/errors.hpp"
#include "prospect/util.hpp"

namespace prospect {

// 8-bit RGBA image, row-major.
struct ImageRgba {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // 4 bytes per pixel

    ImageRgba() = default;
    ImageRgba(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 4, 0) {
        if (w <= 0 || h <= 0) throw DomainError("image dimensions must be positive");
    }

    std::uint8_t* px(int row, int col) {
        return pixels.data() + (static_cast<std::size_t>(row) * width + col) * 4;
    }
    const std::uint8_t* px(int row, int col) const {
        return pixels.data() + (static_cast<std::size_t>(row) * width + col) * 4;
    }
};

namespace detail {

inline void put_u32_be(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

inline void put_chunk(std::string& out, const char type[4], const std::string& data) {
    put_u32_be(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t crc_start = out.size();
    out.append(type, 4);
    out += data;
    const auto crc = ::crc32(0L, reinterpret_cast<const Bytef*>(out.data() + crc_start),
                             static_cast<uInt>(out.size() - crc_start));
    put_u32_be(out, static_cast<std::uint32_t>(crc));
}

}  // namespace detail

// Minimal PNG encoder: 8-bit RGBA, filter 0, fixed zlib level. Identical
// pixels always produce identical bytes, which the render tests rely on.
inline std::string encode_png(const ImageRgba& img) {
    std::string raw;
    raw.reserve(static_cast<std::size_t>(img.height) * (1 + static_cast<std::size_t>(img.width) * 4));
    for (int r = 0; r < img.height; ++r) {
        raw.push_back('\0');  // filter type 0 per scanline
        raw.append(reinterpret_cast<const char*>(img.px(r, 0)),
                   static_cast<std::size_t>(img.width) * 4);
    }

    uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
    std::string compressed(bound, '\0');
    if (::compress2(reinterpret_cast<Bytef*>(compressed.data()), &bound,
                    reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                    6) != Z_OK) {
        throw IoError("png: zlib compression failed");
    }
    compressed.resize(bound);

    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    detail::put_u32_be(ihdr, static_cast<std::uint32_t>(img.width));
    detail::put_u32_be(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(6);   // color type RGBA
    ihdr.push_back(0);   // compression
    ihdr.push_back(0);   // filter
    ihdr.push_back(0);   // no interlace
    detail::put_chunk(out, "IHDR", ihdr);
    detail::put_chunk(out, "IDAT", compressed);
    detail::put_chunk(out, "IEND", "");
    return out;
}

inline void store_png(const ImageRgba& img, const std::filesystem::path& path) {
    atomic_write_file(path, encode_png(img));
}

}  // namespace prospect
