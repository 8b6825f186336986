#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "prospect/errors.hpp"
#include "prospect/util.hpp"

namespace prospect {

static_assert(std::endian::native == std::endian::little,
              "raster payloads are little-endian; big-endian hosts are unsupported");

// Axis-aligned rectangle in kilometres. Image convention: x grows right,
// y grows down, (x0, y0) is the top-left corner.
struct ExtentKm {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool valid() const { return width() > 0.0 && height() > 0.0; }
    bool operator==(const ExtentKm&) const = default;
};

// Raw value range of one band, as shipped with the source dataset.
struct BandRange {
    std::string band;
    double lo = 0.0;
    double hi = 1.0;
};

// A single-band 2-D grid of real values with geospatial extent.
// Missing pixels carry the `nodata` sentinel; every operation in this
// toolkit propagates the sentinel and keeps it out of arithmetic.
class Raster {
public:
    static constexpr double kDefaultNoData = -9999.0;

    Raster() = default;
    Raster(std::string band, int width, int height, ExtentKm extent,
           double fill = 0.0, double nodata = kDefaultNoData)
        : band_(std::move(band)),
          width_(width),
          height_(height),
          extent_(extent),
          nodata_(nodata),
          values_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
        if (width <= 0 || height <= 0) throw DomainError("raster dimensions must be positive");
        if (!extent_.valid()) throw DomainError("raster extent must have positive width and height");
    }

    const std::string& band() const { return band_; }
    void set_band(std::string b) { band_ = std::move(b); }
    int width() const { return width_; }
    int height() const { return height_; }
    const ExtentKm& extent() const { return extent_; }
    double nodata() const { return nodata_; }
    std::size_t size() const { return values_.size(); }

    double km_per_px_x() const { return extent_.width() / width_; }
    double km_per_px_y() const { return extent_.height() / height_; }

    double at(int row, int col) const { return values_[index(row, col)]; }
    double& at(int row, int col) { return values_[index(row, col)]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool is_missing(double v) const { return v == nodata_; }
    void set_missing(int row, int col) { values_[index(row, col)] = nodata_; }

    std::size_t missing_count() const {
        std::size_t n = 0;
        for (double v : values_) n += is_missing(v) ? 1 : 0;
        return n;
    }

    bool same_shape(const Raster& other) const {
        return width_ == other.width_ && height_ == other.height_ && extent_ == other.extent_;
    }

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    std::string band_;
    int width_ = 0;
    int height_ = 0;
    ExtentKm extent_{};
    double nodata_ = kDefaultNoData;
    std::vector<double> values_;
};

namespace detail {

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace detail

// On-disk format: `<stem>.band` holds row-major float32 little-endian values,
// `<stem>.hdr` is a text header with one `key value` pair per line:
//   width, height, band, extent_km (x0 y0 x1 y1), nodata.
inline void store_raster(const Raster& r, const std::filesystem::path& stem) {
    std::ostringstream hdr;
    hdr << "width " << r.width() << "\n"
        << "height " << r.height() << "\n"
        << "band " << r.band() << "\n"
        << "extent_km " << detail::format_double(r.extent().x0) << " "
        << detail::format_double(r.extent().y0) << " "
        << detail::format_double(r.extent().x1) << " "
        << detail::format_double(r.extent().y1) << "\n"
        << "nodata " << detail::format_double(r.nodata()) << "\n";

    std::string payload(r.size() * sizeof(float), '\0');
    for (std::size_t i = 0; i < r.size(); ++i) {
        const float f = static_cast<float>(r.values()[i]);
        std::memcpy(payload.data() + i * sizeof(float), &f, sizeof(float));
    }

    std::filesystem::path hdr_path = stem;
    hdr_path += ".hdr";
    std::filesystem::path band_path = stem;
    band_path += ".band";
    atomic_write_file(hdr_path, hdr.str());
    atomic_write_file(band_path, payload);
}

inline Raster load_raster(const std::filesystem::path& stem) {
    std::filesystem::path hdr_path = stem;
    hdr_path += ".hdr";
    std::filesystem::path band_path = stem;
    band_path += ".band";

    int width = -1, height = -1;
    std::string band;
    ExtentKm extent;
    bool have_extent = false;
    double nodata = Raster::kDefaultNoData;

    for (const std::string& raw_line : split_lines(read_file(hdr_path))) {
        const std::string line = trim(raw_line);
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string key;
        is >> key;
        if (key == "width") {
            is >> width;
        } else if (key == "height") {
            is >> height;
        } else if (key == "band") {
            is >> band;
        } else if (key == "extent_km") {
            is >> extent.x0 >> extent.y0 >> extent.x1 >> extent.y1;
            have_extent = !is.fail();
        } else if (key == "nodata") {
            is >> nodata;
        } else {
            throw IoError("malformed header line in " + hdr_path.string() + ": " + line);
        }
        if (is.fail()) throw IoError("malformed header value in " + hdr_path.string() + ": " + line);
    }
    if (width <= 0 || height <= 0 || band.empty() || !have_extent) {
        throw IoError("incomplete raster header: " + hdr_path.string());
    }
    if (!extent.valid()) throw IoError("degenerate extent in header: " + hdr_path.string());

    const std::string payload = read_file(band_path);
    const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (payload.size() != expected * sizeof(float)) {
        throw IoError("dimension mismatch: " + band_path.string() + " holds " +
                      std::to_string(payload.size() / sizeof(float)) + " values, header declares " +
                      std::to_string(expected));
    }

    Raster r(band, width, height, extent, 0.0, nodata);
    for (std::size_t i = 0; i < expected; ++i) {
        float f;
        std::memcpy(&f, payload.data() + i * sizeof(float), sizeof(float));
        r.values()[i] = static_cast<double>(f);
    }
    return r;
}

// Scalar core of the band-range normalization: (x - lo) / (hi - lo), clamped
// to [0,1] so raw values outside the published range cannot escape the unit
// interval.
inline double min_max_normalize_value(double x, double lo, double hi) {
    const double v = (x - lo) / (hi - lo);
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

// Scalar core of the clipping normalization: 0 below a, 1 above b, linear in
// between.
inline double clipped_norm_value(double x, double a, double b) {
    if (x < a) return 0.0;
    if (x > b) return 1.0;
    return (x - a) / (b - a);
}

inline Raster min_max_normalize(const Raster& r, const BandRange& range) {
    if (!(range.lo < range.hi)) {
        throw DomainError("degenerate band range for '" + range.band + "': lo must be < hi");
    }
    Raster out = r;
    for (double& v : out.values()) {
        if (!out.is_missing(v)) v = min_max_normalize_value(v, range.lo, range.hi);
    }
    return out;
}

inline Raster clipped_norm(const Raster& r, double a, double b) {
    if (!(a < b)) throw DomainError("clipped_norm requires a < b");
    Raster out = r;
    for (double& v : out.values()) {
        if (!out.is_missing(v)) v = clipped_norm_value(v, a, b);
    }
    return out;
}

}  // namespace prospect
