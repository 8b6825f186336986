#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "prospect/raster.hpp"

namespace prospect {

// Band identifiers used throughout: the geological false-color layer plus the
// eight hyperspectral index layers.
namespace bands {
inline constexpr const char* kGeo = "geo";  // false color image
inline constexpr const char* kOx = "ox";    // ferric oxide content
inline constexpr const char* kOh = "oh";    // FeOH group content
inline constexpr const char* kOp = "op";    // opaque index
inline constexpr const char* kAl = "al";    // AlOH group content
inline constexpr const char* kMg = "mg";    // MgOH group content
inline constexpr const char* kFe = "fe";    // ferrous iron content
inline constexpr const char* kQa = "qa";    // quartz index
inline constexpr const char* kSi = "si";    // silica index
}  // namespace bands

inline const std::vector<std::string>& hyperspectral_bands() {
    static const std::vector<std::string> v = {bands::kOx, bands::kOh, bands::kOp, bands::kAl,
                                               bands::kMg, bands::kFe, bands::kQa, bands::kSi};
    return v;
}

inline const std::vector<std::string>& all_bands() {
    static const std::vector<std::string> v = {bands::kGeo, bands::kOx, bands::kOh,
                                               bands::kOp,  bands::kAl, bands::kMg,
                                               bands::kFe,  bands::kQa, bands::kSi};
    return v;
}

// A deposit signature: weighted linear combination of normalized bands,
// clipped to a domain-specific output range.
struct SignatureSpec {
    std::string name;
    std::vector<std::pair<std::string, double>> terms;  // (band, weight > 0)
    double out_lo = 0.0;
    double out_hi = 1.0;

    void validate() const {
        if (terms.empty()) throw ConfigError("signature '" + name + "' has no terms");
        if (!(out_lo < out_hi)) throw ConfigError("signature '" + name + "' range is degenerate");
        for (const auto& [band, w] : terms) {
            if (!(w > 0.0)) throw ConfigError("signature '" + name + "' has non-positive weight for " + band);
        }
    }
};

// The full recipe for one deposit type: per-band raw ranges, the three zone
// signatures, and the prospectivity-map fusion weights.
struct SignatureRegistry {
    std::string deposit_type;
    std::map<std::string, BandRange> band_ranges;
    SignatureSpec hydrothermal;
    SignatureSpec propylitic;
    SignatureSpec silicification;
    double mpm_weight_h = 5.0;
    double mpm_weight_p = 3.0;
    double mpm_weight_s = 1.0;
    double mpm_lo = 0.0;
    double mpm_hi = 5.0;

    void validate() const {
        hydrothermal.validate();
        propylitic.validate();
        silicification.validate();
        if (!(mpm_weight_h > mpm_weight_p && mpm_weight_p > mpm_weight_s)) {
            throw ConfigError("prospectivity weights must be strictly ordered w_h > w_p > w_s");
        }
        if (!(mpm_lo < mpm_hi)) throw ConfigError("prospectivity output range is degenerate");
        for (const auto& [band, range] : band_ranges) {
            if (!(range.lo < range.hi)) throw ConfigError("band range for '" + band + "' is degenerate");
        }
    }

    const BandRange& range_of(const std::string& band) const {
        auto it = band_ranges.find(band);
        if (it == band_ranges.end()) throw ConfigError("no band range registered for '" + band + "'");
        return it->second;
    }
};

// Built-in copper-deposit constants. Raw ranges and band weights follow the
// source dataset's published table; the silicification output range follows
// its defining combination ([1, 2.5]).
inline SignatureRegistry builtin_registry() {
    SignatureRegistry reg;
    reg.deposit_type = "copper";
    reg.band_ranges = {
        {bands::kGeo, {bands::kGeo, 0.0, 1.0}},   {bands::kOx, {bands::kOx, 1.1, 2.1}},
        {bands::kOh, {bands::kOh, 2.03, 2.25}},   {bands::kOp, {bands::kOp, 0.4, 0.9}},
        {bands::kAl, {bands::kAl, 2.0, 2.25}},    {bands::kMg, {bands::kMg, 1.05, 1.2}},
        {bands::kFe, {bands::kFe, 0.1, 2.0}},     {bands::kQa, {bands::kQa, 1.0, 1.35}},
        {bands::kSi, {bands::kSi, 0.5, 0.52}},
    };
    reg.hydrothermal = {"hydrothermal",
                        {{bands::kOx, 1.0}, {bands::kOh, 2.0}, {bands::kOp, 4.0}},
                        1.0,
                        3.0};
    reg.propylitic = {"propylitic",
                      {{bands::kAl, 1.0}, {bands::kOh, 1.0}, {bands::kMg, 1.0}, {bands::kFe, 2.0}},
                      0.6,
                      1.0};
    reg.silicification = {"silicification",
                          {{bands::kOx, 1.0}, {bands::kQa, 1.0}, {bands::kSi, 2.0}},
                          1.0,
                          2.5};
    reg.mpm_weight_h = 5.0;
    reg.mpm_weight_p = 3.0;
    reg.mpm_weight_s = 1.0;
    reg.mpm_lo = 0.0;
    reg.mpm_hi = 5.0;
    return reg;
}

// Pixelwise weighted sum of normalized bands, then clipped to the signature's
// output range. A missing pixel in any contributing band makes the output
// pixel missing.
inline Raster combine(const SignatureSpec& spec, const std::map<std::string, Raster>& bands) {
    spec.validate();
    std::vector<const Raster*> inputs;
    inputs.reserve(spec.terms.size());
    for (const auto& [band, w] : spec.terms) {
        auto it = bands.find(band);
        if (it == bands.end()) {
            throw DomainError("combine: band '" + band + "' required by '" + spec.name + "' is missing");
        }
        inputs.push_back(&it->second);
    }
    const Raster& ref = *inputs.front();
    for (const Raster* r : inputs) {
        if (!r->same_shape(ref)) throw DomainError("combine: input rasters disagree on shape");
        for (double v : r->values()) {
            if (!r->is_missing(v) && (v < 0.0 || v > 1.0)) {
                throw DomainError("combine: band '" + r->band() + "' is not normalized to [0,1]");
            }
        }
    }

    Raster out(spec.name, ref.width(), ref.height(), ref.extent(), 0.0, ref.nodata());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double sum = 0.0;
        bool missing = false;
        for (std::size_t t = 0; t < inputs.size(); ++t) {
            const double v = inputs[t]->values()[i];
            if (inputs[t]->is_missing(v)) {
                missing = true;
                break;
            }
            sum += spec.terms[t].second * v;
        }
        out.values()[i] = missing ? out.nodata() : clipped_norm_value(sum, spec.out_lo, spec.out_hi);
    }
    return out;
}

// Prospectivity map: raw = w_h*sig_h + w_p*sig_p + w_s*sig_s, then the
// attainable sum range [0, w_h+w_p+w_s] is rescaled linearly onto
// [mpm_lo, mpm_hi]. A clip instead of a rescale would flatten nearly half the
// attainable range, so the rescale keeps the zone ordering intact at the top.
inline Raster build_mpm(const Raster& sig_h, const Raster& sig_p, const Raster& sig_s,
                        const SignatureRegistry& reg = builtin_registry()) {
    if (!sig_p.same_shape(sig_h) || !sig_s.same_shape(sig_h)) {
        throw DomainError("build_mpm: signature rasters disagree on shape");
    }
    const double span = reg.mpm_weight_h + reg.mpm_weight_p + reg.mpm_weight_s;
    const double scale = (reg.mpm_hi - reg.mpm_lo) / span;

    Raster out("mpm", sig_h.width(), sig_h.height(), sig_h.extent(), 0.0, sig_h.nodata());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double h = sig_h.values()[i];
        const double p = sig_p.values()[i];
        const double s = sig_s.values()[i];
        if (sig_h.is_missing(h) || sig_p.is_missing(p) || sig_s.is_missing(s)) {
            out.values()[i] = out.nodata();
            continue;
        }
        const double raw = reg.mpm_weight_h * h + reg.mpm_weight_p * p + reg.mpm_weight_s * s;
        out.values()[i] = reg.mpm_lo + raw * scale;
    }
    return out;
}

// --- registry config file -------------------------------------------------
//
// JSON schema (all fields required):
// {
//   "deposit_type": "copper",
//   "band_ranges": { "<band>": [lo, hi], ... },
//   "signatures": {
//     "hydrothermal":   { "terms": { "<band>": weight, ... }, "range": [lo, hi] },
//     "propylitic":     { ... },
//     "silicification": { ... }
//   },
//   "mpm": { "weights": [w_h, w_p, w_s], "range": [lo, hi] }
// }

inline nlohmann::json registry_to_json(const SignatureRegistry& reg) {
    nlohmann::json j;
    j["deposit_type"] = reg.deposit_type;
    for (const auto& [band, range] : reg.band_ranges) {
        j["band_ranges"][band] = {range.lo, range.hi};
    }
    auto spec_json = [](const SignatureSpec& s) {
        nlohmann::json sj;
        for (const auto& [band, w] : s.terms) sj["terms"][band] = w;
        sj["range"] = {s.out_lo, s.out_hi};
        return sj;
    };
    j["signatures"]["hydrothermal"] = spec_json(reg.hydrothermal);
    j["signatures"]["propylitic"] = spec_json(reg.propylitic);
    j["signatures"]["silicification"] = spec_json(reg.silicification);
    j["mpm"]["weights"] = {reg.mpm_weight_h, reg.mpm_weight_p, reg.mpm_weight_s};
    j["mpm"]["range"] = {reg.mpm_lo, reg.mpm_hi};
    return j;
}

inline SignatureRegistry registry_from_json(const nlohmann::json& j) {
    SignatureRegistry reg;
    try {
        reg.deposit_type = j.at("deposit_type").get<std::string>();
        for (const auto& [band, range] : j.at("band_ranges").items()) {
            reg.band_ranges[band] = {band, range.at(0).get<double>(), range.at(1).get<double>()};
        }
        auto spec_from = [](const std::string& name, const nlohmann::json& sj) {
            SignatureSpec s;
            s.name = name;
            for (const auto& [band, w] : sj.at("terms").items()) {
                s.terms.emplace_back(band, w.get<double>());
            }
            s.out_lo = sj.at("range").at(0).get<double>();
            s.out_hi = sj.at("range").at(1).get<double>();
            return s;
        };
        reg.hydrothermal = spec_from("hydrothermal", j.at("signatures").at("hydrothermal"));
        reg.propylitic = spec_from("propylitic", j.at("signatures").at("propylitic"));
        reg.silicification = spec_from("silicification", j.at("signatures").at("silicification"));
        reg.mpm_weight_h = j.at("mpm").at("weights").at(0).get<double>();
        reg.mpm_weight_p = j.at("mpm").at("weights").at(1).get<double>();
        reg.mpm_weight_s = j.at("mpm").at("weights").at(2).get<double>();
        reg.mpm_lo = j.at("mpm").at("range").at(0).get<double>();
        reg.mpm_hi = j.at("mpm").at("range").at(1).get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad registry config: ") + e.what());
    }
    reg.validate();
    return reg;
}

inline void store_registry(const SignatureRegistry& reg, const std::filesystem::path& path) {
    atomic_write_file(path, registry_to_json(reg).dump(2) + "\n");
}

inline SignatureRegistry load_registry(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse registry config " + path.string() + ": " + e.what());
    }
    return registry_from_json(j);
}

}  // namespace prospect
