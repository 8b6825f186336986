#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "prospect/raster.hpp"

namespace prospect {

// Deposit location in kilometres. Global points use the source-raster frame;
// tile-local points are relative to the tile's top-left corner.
struct DepositPoint {
    double x_km = 0.0;
    double y_km = 0.0;
};

// One grid cell cut out of the source rasters: the per-band tiles share
// dimensions and extent, deposits are in tile-local coordinates.
struct AreaTile {
    std::string area_id;
    ExtentKm extent;
    std::map<std::string, Raster> bands;
    std::vector<DepositPoint> deposits;

    double width_km() const { return extent.width(); }
    double height_km() const { return extent.height(); }
};

// Cuts a shared-extent band set into tile_km x tile_km squares anchored at the
// extent origin, left-to-right then top-to-bottom. Partial edge tiles are
// dropped. Deposits falling inside a tile are attached in local coordinates.
inline std::vector<AreaTile> tile_grid(const std::map<std::string, Raster>& rasters,
                                       double tile_km,
                                       const std::vector<DepositPoint>& deposits = {}) {
    if (rasters.empty()) throw DomainError("tile_grid: no input rasters");
    if (!(tile_km > 0.0)) throw DomainError("tile_grid: tile_km must be positive");

    const Raster& ref = rasters.begin()->second;
    if (!ref.extent().valid()) throw DomainError("tile_grid: zero-size extent");
    for (const auto& [band, r] : rasters) {
        if (!r.same_shape(ref)) {
            throw DomainError("tile_grid: band '" + band + "' does not share extent/resolution");
        }
    }

    const double eps = 1e-9;
    const int nx = static_cast<int>(std::floor(ref.extent().width() / tile_km + eps));
    const int ny = static_cast<int>(std::floor(ref.extent().height() / tile_km + eps));
    const double dx = ref.km_per_px_x();
    const double dy = ref.km_per_px_y();

    std::vector<AreaTile> tiles;
    tiles.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    for (int ty = 0; ty < ny; ++ty) {
        for (int tx = 0; tx < nx; ++tx) {
            AreaTile tile;
            char buf[32];
            std::snprintf(buf, sizeof(buf), "tile_r%03d_c%03d", ty, tx);
            tile.area_id = buf;
            tile.extent = ExtentKm{ref.extent().x0 + tx * tile_km, ref.extent().y0 + ty * tile_km,
                                   ref.extent().x0 + (tx + 1) * tile_km,
                                   ref.extent().y0 + (ty + 1) * tile_km};

            const int c0 = static_cast<int>(std::lround((tile.extent.x0 - ref.extent().x0) / dx));
            const int c1 = static_cast<int>(std::lround((tile.extent.x1 - ref.extent().x0) / dx));
            const int r0 = static_cast<int>(std::lround((tile.extent.y0 - ref.extent().y0) / dy));
            const int r1 = static_cast<int>(std::lround((tile.extent.y1 - ref.extent().y0) / dy));

            for (const auto& [band, src] : rasters) {
                Raster cut(band, c1 - c0, r1 - r0, tile.extent, 0.0, src.nodata());
                for (int r = r0; r < r1; ++r) {
                    for (int c = c0; c < c1; ++c) {
                        cut.at(r - r0, c - c0) = src.at(r, c);
                    }
                }
                tile.bands.emplace(band, std::move(cut));
            }

            for (const DepositPoint& p : deposits) {
                if (p.x_km >= tile.extent.x0 && p.x_km < tile.extent.x1 &&
                    p.y_km >= tile.extent.y0 && p.y_km < tile.extent.y1) {
                    tile.deposits.push_back({p.x_km - tile.extent.x0, p.y_km - tile.extent.y0});
                }
            }
            tiles.push_back(std::move(tile));
        }
    }
    return tiles;
}

struct FilterRules {
    double max_missing_fraction = 0.1;
    double deposit_edge_margin_km = 0.5;
};

struct FilterVerdict {
    bool keep = true;
    std::string reason;  // names the triggered rule when keep == false
};

// Missing fraction is aggregated over all per-band tiles; the rules fire in a
// fixed order so the reported reason is stable.
inline FilterVerdict quality_filter(const AreaTile& tile, const FilterRules& rules) {
    std::size_t missing = 0;
    std::size_t total = 0;
    for (const auto& [band, r] : tile.bands) {
        missing += r.missing_count();
        total += r.size();
    }
    if (total > 0 && static_cast<double>(missing) / static_cast<double>(total) >
                         rules.max_missing_fraction) {
        return {false, "missing-fraction"};
    }
    for (const DepositPoint& p : tile.deposits) {
        const double m = rules.deposit_edge_margin_km;
        if (p.x_km < m || p.y_km < m || tile.width_km() - p.x_km < m ||
            tile.height_km() - p.y_km < m) {
            return {false, "deposit-near-edge"};
        }
    }
    return {true, ""};
}

// Deposit points CSV: `area_id,x_km,y_km` with a header line.
inline std::map<std::string, std::vector<DepositPoint>> load_deposits_csv(
    const std::filesystem::path& path) {
    std::map<std::string, std::vector<DepositPoint>> out;
    const std::vector<std::string> lines = split_lines(read_file(path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.empty()) continue;
        if (i == 0 && to_lower(line).find("area_id") != std::string::npos) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 3) throw IoError("bad deposit row: " + line);
        try {
            out[trim(fields[0])].push_back({std::stod(fields[1]), std::stod(fields[2])});
        } catch (const std::exception&) {
            throw IoError("bad deposit coordinates: " + line);
        }
    }
    return out;
}

inline void store_deposits_csv(const std::map<std::string, std::vector<DepositPoint>>& deposits,
                               const std::filesystem::path& path) {
    std::ostringstream os;
    os << "area_id,x_km,y_km\n";
    os.precision(17);
    for (const auto& [area, points] : deposits) {
        for (const DepositPoint& p : points) {
            os << area << "," << p.x_km << "," << p.y_km << "\n";
        }
    }
    atomic_write_file(path, os.str());
}

}  // namespace prospect
