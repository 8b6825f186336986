#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "prospect/rng.hpp"
#include "prospect/signature.hpp"
#include "prospect/tiling.hpp"

namespace prospect {

// ---------------------------------------------------------------------------
// Records and manifests
// ---------------------------------------------------------------------------

// One benchmark area: label, raster stems, and (once preprocessed) derived
// signature/prospectivity stems plus rendered PNGs. All paths are relative to
// the manifest's directory.
struct AreaRecord {
    std::string id;
    int label = 0;  // 1 = deposit present
    std::map<std::string, std::string> bands;    // band id -> raster stem
    std::map<std::string, std::string> derived;  // sig_h|sig_p|sig_s|mpm -> raster stem
    std::map<std::string, std::string> images;   // render role -> png path
    std::vector<DepositPoint> deposits;          // tile-local km
};

struct Manifest {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<AreaRecord> areas;
    std::filesystem::path dir;  // runtime only; set when loaded/stored

    std::size_t count_label(int label) const {
        std::size_t n = 0;
        for (const auto& a : areas) n += (a.label == label) ? 1 : 0;
        return n;
    }

    const AreaRecord& area(const std::string& id) const {
        for (const auto& a : areas) {
            if (a.id == id) return a;
        }
        throw DomainError("manifest has no area '" + id + "'");
    }

    std::filesystem::path resolve(const std::string& rel) const { return dir / rel; }
};

inline nlohmann::json manifest_to_json(const Manifest& m) {
    nlohmann::json j;
    j["name"] = m.name;
    j["seed"] = m.seed;
    j["positives"] = m.count_label(1);
    j["negatives"] = m.count_label(0);
    j["areas"] = nlohmann::json::array();
    for (const auto& a : m.areas) {
        nlohmann::json aj;
        aj["id"] = a.id;
        aj["label"] = a.label;
        aj["bands"] = a.bands;
        if (!a.derived.empty()) aj["derived"] = a.derived;
        if (!a.images.empty()) aj["images"] = a.images;
        if (!a.deposits.empty()) {
            auto& dj = aj["deposits"] = nlohmann::json::array();
            for (const auto& p : a.deposits) dj.push_back({p.x_km, p.y_km});
        }
        j["areas"].push_back(std::move(aj));
    }
    return j;
}

inline Manifest manifest_from_json(const nlohmann::json& j, std::filesystem::path dir) {
    Manifest m;
    m.dir = std::move(dir);
    try {
        m.name = j.at("name").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& aj : j.at("areas")) {
            AreaRecord a;
            a.id = aj.at("id").get<std::string>();
            a.label = aj.at("label").get<int>();
            if (a.label != 0 && a.label != 1) throw ConfigError("label must be 0 or 1: " + a.id);
            a.bands = aj.at("bands").get<std::map<std::string, std::string>>();
            if (aj.contains("derived")) {
                a.derived = aj.at("derived").get<std::map<std::string, std::string>>();
            }
            if (aj.contains("images")) {
                a.images = aj.at("images").get<std::map<std::string, std::string>>();
            }
            if (aj.contains("deposits")) {
                for (const auto& pj : aj.at("deposits")) {
                    a.deposits.push_back({pj.at(0).get<double>(), pj.at(1).get<double>()});
                }
            }
            m.areas.push_back(std::move(a));
        }
        const auto pos = j.at("positives").get<std::size_t>();
        const auto neg = j.at("negatives").get<std::size_t>();
        if (pos != m.count_label(1) || neg != m.count_label(0)) {
            throw ConfigError("manifest counts disagree with the area list");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad manifest: ") + e.what());
    }
    return m;
}

inline void store_manifest(const Manifest& m, const std::filesystem::path& path) {
    atomic_write_file(path, manifest_to_json(m).dump(2) + "\n");
}

inline Manifest load_manifest(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse manifest " + path.string() + ": " + e.what());
    }
    return manifest_from_json(j, path.parent_path());
}

// Checks that every referenced file exists; returns the list of problems.
inline std::vector<std::string> validate_manifest_files(const Manifest& m) {
    std::vector<std::string> problems;
    auto check_stem = [&](const std::string& id, const std::string& stem) {
        for (const char* ext : {".band", ".hdr"}) {
            std::filesystem::path p = m.resolve(stem + ext);
            if (!std::filesystem::exists(p)) {
                problems.push_back(id + ": missing " + p.string());
            }
        }
    };
    for (const auto& a : m.areas) {
        for (const auto& [band, stem] : a.bands) check_stem(a.id, stem);
        for (const auto& [kind, stem] : a.derived) check_stem(a.id, stem);
        for (const auto& [role, png] : a.images) {
            if (!std::filesystem::exists(m.resolve(png))) {
                problems.push_back(a.id + ": missing " + m.resolve(png).string());
            }
        }
    }
    return problems;
}

// Deposit-label CSV: `area_id,label` with a header line.
inline std::map<std::string, int> load_labels_csv(const std::filesystem::path& path) {
    std::map<std::string, int> out;
    const auto lines = split_lines(read_file(path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.empty()) continue;
        if (i == 0 && to_lower(line).find("area_id") != std::string::npos) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 2) throw IoError("bad label row: " + line);
        const std::string label = trim(fields[1]);
        if (label != "0" && label != "1") throw IoError("label must be 0 or 1: " + line);
        out[trim(fields[0])] = label == "1" ? 1 : 0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Imbalanced sampling
// ---------------------------------------------------------------------------

// Keeps every positive and draws round(neg_per_pos * |pos|) negatives without
// replacement. Deterministic per seed.
inline Manifest sample_imbalanced(const std::vector<AreaRecord>& positives,
                                  const std::vector<AreaRecord>& negatives, double neg_per_pos,
                                  std::uint64_t seed) {
    if (positives.empty()) throw DomainError("sample_imbalanced: no positive areas");
    const auto want = static_cast<std::size_t>(std::llround(neg_per_pos * positives.size()));
    if (want > negatives.size()) {
        throw DomainError("sample_imbalanced: need " + std::to_string(want) + " negatives, have " +
                          std::to_string(negatives.size()));
    }
    std::vector<std::size_t> order(negatives.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    Manifest m;
    m.seed = seed;
    m.name = "sampled";
    m.areas = positives;
    for (std::size_t i = 0; i < want; ++i) m.areas.push_back(negatives[order[i]]);
    return m;
}

// ---------------------------------------------------------------------------
// Settings
// ---------------------------------------------------------------------------

enum class Setting { Easy, Standard, Hard };

inline std::string to_string(Setting s) {
    switch (s) {
        case Setting::Easy: return "easy";
        case Setting::Standard: return "standard";
        case Setting::Hard: return "hard";
    }
    return "?";
}

inline Setting setting_from_string(const std::string& s) {
    const std::string v = to_lower(s);
    if (v == "easy") return Setting::Easy;
    if (v == "standard") return Setting::Standard;
    if (v == "hard") return Setting::Hard;
    throw ConfigError("unknown setting '" + s + "' (expected easy|standard|hard)");
}

// Ordered input-image roles per setting. Easy shows the fused prospectivity
// map, Standard the three signatures, Hard the raw bands.
struct SettingConfig {
    Setting setting = Setting::Standard;
    std::vector<std::string> roles;

    static SettingConfig make(Setting s) {
        SettingConfig cfg;
        cfg.setting = s;
        switch (s) {
            case Setting::Easy: cfg.roles = {"geo", "mpm"}; break;
            case Setting::Standard: cfg.roles = {"geo", "sig_h", "sig_p", "sig_s"}; break;
            case Setting::Hard:
                cfg.roles = {"geo"};
                for (const auto& b : hyperspectral_bands()) cfg.roles.push_back(b);
                break;
        }
        return cfg;
    }

    std::size_t expected_images() const { return roles.size(); }
};

// One input image handed to a backend: the numeric raster (for the oracle)
// and the rendered PNG (for HTTP multimodal calls).
struct ImageRef {
    std::string role;
    std::filesystem::path raster_stem;
    std::filesystem::path png;
};

inline std::vector<ImageRef> setting_inputs(const AreaRecord& area, const SettingConfig& cfg,
                                            const Manifest& manifest) {
    std::vector<ImageRef> refs;
    for (const std::string& role : cfg.roles) {
        ImageRef ref;
        ref.role = role;
        const bool is_band = area.bands.count(role) > 0;
        const bool is_derived = area.derived.count(role) > 0;
        if (is_band) {
            ref.raster_stem = manifest.resolve(area.bands.at(role));
        } else if (is_derived) {
            ref.raster_stem = manifest.resolve(area.derived.at(role));
        } else {
            throw DomainError("area '" + area.id + "' lacks layer '" + role + "' required by the " +
                              to_string(cfg.setting) + " setting (run preprocess first?)");
        }
        if (auto it = area.images.find(role); it != area.images.end()) {
            ref.png = manifest.resolve(it->second);
        }
        refs.push_back(std::move(ref));
    }
    return refs;
}

// ---------------------------------------------------------------------------
// Synthetic benchmark generator
// ---------------------------------------------------------------------------

struct SynthOptions {
    int width = 64;
    int height = 64;
    double tile_km = 12.0;
    // Mixture of negative-area patterns: background / rim only / halo+rim.
    double frac_neg_background = 0.6;
    double frac_neg_rim_only = 0.2;
};

namespace detail {

struct ZoneValues {
    double ox = 0.05, oh = 0.05, op = 0.05, al = 0.05;
    double mg = 0.05, fe = 0.05, qa = 0.05, si = 0.05;
};

// Concentric deposit pattern in normalized band space. The three rings drive
// the three signature combinations: the core saturates the hydrothermal sum,
// the halo the propylitic sum, the rim the silicification sum.
inline void apply_pattern(std::map<std::string, Raster>& bands, double cx_km, double cy_km,
                          double amp, bool core, bool halo, bool rim) {
    const Raster& ref = bands.at(bands::kOx);
    const double r_core = 1.8, r_halo = 3.4, r_rim = 4.6;
    for (int r = 0; r < ref.height(); ++r) {
        for (int c = 0; c < ref.width(); ++c) {
            const double x = (c + 0.5) * ref.km_per_px_x();
            const double y = (r + 0.5) * ref.km_per_px_y();
            const double d = std::hypot(x - cx_km, y - cy_km);
            ZoneValues z;
            if (core && d <= r_core) {
                z.ox = 0.9 * amp;
                z.oh = 0.9 * amp;
                z.op = 0.9 * amp;
            } else if (halo && d > r_core && d <= r_halo) {
                z.al = 0.9 * amp;
                z.oh = 0.75 * amp;
                z.mg = 0.9 * amp;
                z.fe = 0.8 * amp;
            } else if (rim && d > r_halo && d <= r_rim) {
                z.ox = 0.65 * amp;
                z.qa = 0.9 * amp;
                z.si = 0.85 * amp;
            } else {
                continue;
            }
            bands.at(bands::kOx).at(r, c) = std::max(bands.at(bands::kOx).at(r, c), z.ox);
            bands.at(bands::kOh).at(r, c) = std::max(bands.at(bands::kOh).at(r, c), z.oh);
            bands.at(bands::kOp).at(r, c) = std::max(bands.at(bands::kOp).at(r, c), z.op);
            bands.at(bands::kAl).at(r, c) = std::max(bands.at(bands::kAl).at(r, c), z.al);
            bands.at(bands::kMg).at(r, c) = std::max(bands.at(bands::kMg).at(r, c), z.mg);
            bands.at(bands::kFe).at(r, c) = std::max(bands.at(bands::kFe).at(r, c), z.fe);
            bands.at(bands::kQa).at(r, c) = std::max(bands.at(bands::kQa).at(r, c), z.qa);
            bands.at(bands::kSi).at(r, c) = std::max(bands.at(bands::kSi).at(r, c), z.si);
        }
    }
}

inline Raster make_geo(const SynthOptions& opts, const ExtentKm& extent, Rng& rng, double noise) {
    Raster geo(bands::kGeo, opts.width, opts.height, extent);
    // Base brightness varies per area, independent of the label.
    const double base = 0.04 + 0.92 * rng.next_double();
    const double amp1 = 0.06 + 0.06 * rng.next_double();
    const double fx = 1.0 + std::floor(rng.next_double() * 3.0);
    const double fy = 1.0 + std::floor(rng.next_double() * 3.0);
    const double ph1 = rng.next_double() * 6.28318530717958647692;
    const double ph2 = rng.next_double() * 6.28318530717958647692;
    for (int r = 0; r < opts.height; ++r) {
        for (int c = 0; c < opts.width; ++c) {
            const double v = base +
                             amp1 * std::sin(6.28318530717958647692 * fx * c / opts.width + ph1) *
                                 std::cos(6.28318530717958647692 * fy * r / opts.height + ph2);
            geo.at(r, c) = v;
        }
    }
    // Lineaments: dark structural lines, count independent of the label.
    const int n_lines = static_cast<int>(rng.next_below(11));
    for (int i = 0; i < n_lines; ++i) {
        double x = rng.next_double() * opts.width;
        double y = rng.next_double() * opts.height;
        const double theta = rng.next_double() * 6.28318530717958647692;
        const double dx = std::cos(theta);
        const double dy = std::sin(theta);
        const int len = 20 + static_cast<int>(rng.next_below(31));
        for (int s = 0; s < len; ++s) {
            const int cc = static_cast<int>(x);
            const int rr = static_cast<int>(y);
            if (cc >= 0 && cc < opts.width && rr >= 0 && rr < opts.height) {
                geo.at(rr, cc) -= 0.3;
            }
            x += dx;
            y += dy;
        }
    }
    for (double& v : geo.values()) {
        v += noise * rng.next_gaussian();
        v = std::clamp(v, 0.0, 1.0);
        v = static_cast<double>(static_cast<float>(v));
    }
    return geo;
}

}  // namespace detail

// Generates one area's nine raw-band rasters plus deposit points. Raw values
// are the normalized pattern mapped back into each band's published range, so
// the preprocessing pipeline recovers the pattern exactly.
inline AreaRecord synthesize_area(const std::filesystem::path& out_dir,
                                  const std::filesystem::path& manifest_dir, const std::string& id,
                                  int label, double noise, Rng rng,
                                  const SignatureRegistry& reg = builtin_registry(),
                                  const SynthOptions& opts = {}) {
    const ExtentKm extent{0.0, 0.0, opts.tile_km, opts.tile_km};

    std::map<std::string, Raster> bands;
    for (const auto& b : hyperspectral_bands()) {
        bands.emplace(b, Raster(b, opts.width, opts.height, extent, 0.05));
    }

    AreaRecord rec;
    rec.id = id;
    rec.label = label;

    const double amp = 0.92 + 0.08 * rng.next_double();
    const double jitter = 1.2;
    const double cx = opts.tile_km / 2.0 + (rng.next_double() - 0.5) * 2.0 * jitter;
    const double cy = opts.tile_km / 2.0 + (rng.next_double() - 0.5) * 2.0 * jitter;

    if (label == 1) {
        detail::apply_pattern(bands, cx, cy, amp, true, true, true);
        rec.deposits.push_back({cx, cy});
    } else {
        const double u = rng.next_double();
        const SynthOptions& o = opts;
        if (u < o.frac_neg_background) {
            // plain background
        } else if (u < o.frac_neg_background + o.frac_neg_rim_only) {
            detail::apply_pattern(bands, cx, cy, amp, false, false, true);
        } else {
            detail::apply_pattern(bands, cx, cy, amp, false, true, true);
        }
    }

    for (auto& [name, r] : bands) {
        const BandRange& range = reg.range_of(name);
        for (double& v : r.values()) {
            v = std::clamp(v + noise * rng.next_gaussian(), 0.0, 1.0);
            v = range.lo + v * (range.hi - range.lo);
            v = static_cast<double>(static_cast<float>(v));
        }
    }
    bands.emplace(bands::kGeo, detail::make_geo(opts, extent, rng, noise));

    for (const auto& [name, r] : bands) {
        const std::string rel = (std::filesystem::path("areas") / id / name).generic_string();
        store_raster(r, out_dir / rel);
        rec.bands[name] = std::filesystem::relative(out_dir / rel, manifest_dir).generic_string();
    }
    return rec;
}

// Full synthetic benchmark: positive areas hold the complete concentric
// pattern, negatives hold background or incomplete zonation. Writes rasters
// under <out_dir>/areas/ and returns the manifest (not yet stored).
inline Manifest synthesize_dataset(const std::filesystem::path& out_dir, std::size_t n_pos,
                                   std::size_t n_neg, double noise, std::uint64_t seed,
                                   const SignatureRegistry& reg = builtin_registry(),
                                   const SynthOptions& opts = {}) {
    if (noise < 0.0) throw DomainError("noise must be >= 0");
    Manifest m;
    m.name = "synthetic";
    m.seed = seed;
    m.dir = out_dir;
    char buf[32];
    for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
        std::snprintf(buf, sizeof(buf), "area_%04zu", i);
        const int label = i < n_pos ? 1 : 0;
        m.areas.push_back(synthesize_area(out_dir, out_dir, buf, label, noise,
                                          Rng(seed).fork(i), reg, opts));
    }
    return m;
}

}  // namespace prospect
