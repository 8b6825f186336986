#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "prospect/rng.hpp"
#include "prospect/signature.hpp"

using namespace prospect;

namespace {

std::map<std::string, Raster> uniform_bands(const std::vector<std::string>& names, double value,
                                            int px = 4) {
    std::map<std::string, Raster> m;
    for (const auto& n : names) {
        m.emplace(n, Raster(n, px, px, ExtentKm{0, 0, 12, 12}, value));
    }
    return m;
}

}  // namespace

TEST_CASE("builtin registry carries the published constants") {
    const SignatureRegistry reg = builtin_registry();
    reg.validate();

    auto weight_of = [](const SignatureSpec& s, const std::string& band) {
        for (const auto& [b, w] : s.terms) {
            if (b == band) return w;
        }
        FAIL("missing term " + band);
        return 0.0;
    };

    REQUIRE(weight_of(reg.hydrothermal, "ox") == 1.0);
    REQUIRE(weight_of(reg.hydrothermal, "oh") == 2.0);
    REQUIRE(weight_of(reg.hydrothermal, "op") == 4.0);
    REQUIRE(reg.hydrothermal.out_lo == 1.0);
    REQUIRE(reg.hydrothermal.out_hi == 3.0);

    REQUIRE(weight_of(reg.propylitic, "al") == 1.0);
    REQUIRE(weight_of(reg.propylitic, "oh") == 1.0);
    REQUIRE(weight_of(reg.propylitic, "mg") == 1.0);
    REQUIRE(weight_of(reg.propylitic, "fe") == 2.0);
    REQUIRE(reg.propylitic.out_lo == 0.6);
    REQUIRE(reg.propylitic.out_hi == 1.0);

    REQUIRE(weight_of(reg.silicification, "ox") == 1.0);
    REQUIRE(weight_of(reg.silicification, "qa") == 1.0);
    REQUIRE(weight_of(reg.silicification, "si") == 2.0);
    REQUIRE(reg.silicification.out_lo == 1.0);
    REQUIRE(reg.silicification.out_hi == 2.5);

    REQUIRE(reg.range_of("ox").lo == 1.1);
    REQUIRE(reg.range_of("ox").hi == 2.1);
    REQUIRE(reg.range_of("oh").lo == 2.03);
    REQUIRE(reg.range_of("oh").hi == 2.25);
    REQUIRE(reg.range_of("op").lo == 0.4);
    REQUIRE(reg.range_of("op").hi == 0.9);
    REQUIRE(reg.range_of("al").lo == 2.0);
    REQUIRE(reg.range_of("al").hi == 2.25);
    REQUIRE(reg.range_of("mg").lo == 1.05);
    REQUIRE(reg.range_of("mg").hi == 1.2);
    REQUIRE(reg.range_of("fe").lo == 0.1);
    REQUIRE(reg.range_of("fe").hi == 2.0);
    REQUIRE(reg.range_of("qa").lo == 1.0);
    REQUIRE(reg.range_of("qa").hi == 1.35);
    REQUIRE(reg.range_of("si").lo == 0.5);
    REQUIRE(reg.range_of("si").hi == 0.52);
    REQUIRE(reg.range_of("geo").lo == 0.0);
    REQUIRE(reg.range_of("geo").hi == 1.0);

    REQUIRE(reg.mpm_weight_h == 5.0);
    REQUIRE(reg.mpm_weight_p == 3.0);
    REQUIRE(reg.mpm_weight_s == 1.0);
    REQUIRE(reg.mpm_lo == 0.0);
    REQUIRE(reg.mpm_hi == 5.0);
}

TEST_CASE("registry config file round-trips") {
    const SignatureRegistry reg = builtin_registry();
    const auto path = std::filesystem::temp_directory_path() / "prospect_registry.json";
    store_registry(reg, path);
    const SignatureRegistry back = load_registry(path);

    REQUIRE(back.deposit_type == reg.deposit_type);
    REQUIRE(back.band_ranges.size() == 9);
    for (const auto& [band, range] : reg.band_ranges) {
        REQUIRE(back.range_of(band).lo == range.lo);
        REQUIRE(back.range_of(band).hi == range.hi);
    }
    auto as_map = [](const SignatureSpec& s) {
        std::map<std::string, double> m;
        for (const auto& [b, w] : s.terms) m[b] = w;
        return m;
    };
    REQUIRE(as_map(back.hydrothermal) == as_map(reg.hydrothermal));
    REQUIRE(as_map(back.propylitic) == as_map(reg.propylitic));
    REQUIRE(as_map(back.silicification) == as_map(reg.silicification));
    REQUIRE(back.mpm_weight_h == 5.0);
    REQUIRE(back.mpm_weight_p == 3.0);
    REQUIRE(back.mpm_weight_s == 1.0);
}

TEST_CASE("hydrothermal combination clips at both ends and is linear between") {
    const SignatureRegistry reg = builtin_registry();

    auto zeros = uniform_bands({"ox", "oh", "op"}, 0.0);
    REQUIRE(combine(reg.hydrothermal, zeros).values()[0] == 0.0);

    auto ones = uniform_bands({"ox", "oh", "op"}, 1.0);  // weighted sum 7 > 3
    REQUIRE(combine(reg.hydrothermal, ones).values()[0] == 1.0);

    auto mid = uniform_bands({"ox", "oh", "op"}, 0.0);
    for (auto& [k, r] : mid) {
        double v = k == "ox" ? 1.0 : (k == "oh" ? 0.5 : 0.0);
        for (double& x : r.values()) x = v;
    }
    // sum = 1 + 2*0.5 + 4*0 = 2 -> (2-1)/(3-1) = 0.5
    REQUIRE(combine(reg.hydrothermal, mid).values()[0] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("combine rejects missing bands and unnormalized inputs") {
    const SignatureRegistry reg = builtin_registry();
    auto incomplete = uniform_bands({"ox", "oh"}, 0.5);
    REQUIRE_THROWS_AS(combine(reg.hydrothermal, incomplete), DomainError);

    auto bad = uniform_bands({"ox", "oh", "op"}, 0.5);
    bad.at("op").values()[3] = 1.7;
    REQUIRE_THROWS_AS(combine(reg.hydrothermal, bad), DomainError);
}

TEST_CASE("combine propagates missing pixels from any contributing band") {
    const SignatureRegistry reg = builtin_registry();
    auto bands = uniform_bands({"ox", "oh", "op"}, 0.8);
    bands.at("oh").set_missing(1, 2);
    Raster sig = combine(reg.hydrothermal, bands);
    REQUIRE(sig.is_missing(sig.at(1, 2)));
    REQUIRE_FALSE(sig.is_missing(sig.at(0, 0)));
}

TEST_CASE("prospectivity map rescales the attainable sum onto [0,5]") {
    auto sig = [](double v) { return Raster("s", 2, 2, ExtentKm{0, 0, 12, 12}, v); };

    REQUIRE(build_mpm(sig(0), sig(0), sig(0)).values()[0] == 0.0);
    REQUIRE(build_mpm(sig(1), sig(1), sig(1)).values()[0] == Catch::Approx(5.0).margin(1e-12));
    // 5*0.6 = 3.0 raw -> 3*5/9
    REQUIRE(build_mpm(sig(0.6), sig(0), sig(0)).values()[0] ==
            Catch::Approx(3.0 * 5.0 / 9.0).margin(1e-12));
}

TEST_CASE("prospectivity map rejects mismatched shapes and propagates missing") {
    Raster a("s", 2, 2, ExtentKm{0, 0, 12, 12}, 0.5);
    Raster b("s", 3, 2, ExtentKm{0, 0, 12, 12}, 0.5);
    REQUIRE_THROWS_AS(build_mpm(a, b, a), DomainError);

    Raster c = a;
    c.set_missing(0, 0);
    Raster mpm = build_mpm(a, c, a);
    REQUIRE(mpm.is_missing(mpm.at(0, 0)));
}

TEST_CASE("equal increments to the three signatures move the map 5:3:1") {
    auto sig = [](double v) { return Raster("s", 1, 1, ExtentKm{0, 0, 12, 12}, v); };
    const double base = 0.3, delta = 0.1;
    const double o0 = build_mpm(sig(base), sig(base), sig(base)).values()[0];
    const double dh = build_mpm(sig(base + delta), sig(base), sig(base)).values()[0] - o0;
    const double dp = build_mpm(sig(base), sig(base + delta), sig(base)).values()[0] - o0;
    const double ds = build_mpm(sig(base), sig(base), sig(base + delta)).values()[0] - o0;
    REQUIRE(dh / ds == Catch::Approx(5.0).margin(1e-9));
    REQUIRE(dp / ds == Catch::Approx(3.0).margin(1e-9));
}

TEST_CASE("scalar oracle matches the raster pipeline on random normalized bands") {
    const SignatureRegistry reg = builtin_registry();
    Rng rng(99);
    auto bands = uniform_bands({"ox", "oh", "op", "al", "mg", "fe", "qa", "si"}, 0.0, 16);
    for (auto& [k, r] : bands) {
        for (double& v : r.values()) v = rng.next_double();
    }
    const Raster sig_h = combine(reg.hydrothermal, bands);
    const Raster sig_p = combine(reg.propylitic, bands);
    const Raster sig_s = combine(reg.silicification, bands);
    const Raster mpm = build_mpm(sig_h, sig_p, sig_s, reg);

    auto norm = [](double x, double a, double b) {
        if (x < a) return 0.0;
        if (x > b) return 1.0;
        return (x - a) / (b - a);
    };
    for (std::size_t i = 0; i < mpm.size(); ++i) {
        const double ox = bands.at("ox").values()[i], oh = bands.at("oh").values()[i];
        const double op = bands.at("op").values()[i], al = bands.at("al").values()[i];
        const double mg = bands.at("mg").values()[i], fe = bands.at("fe").values()[i];
        const double qa = bands.at("qa").values()[i], si = bands.at("si").values()[i];
        const double h = norm(ox + 2 * oh + 4 * op, 1.0, 3.0);
        const double p = norm(al + oh + mg + 2 * fe, 0.6, 1.0);
        const double s = norm(ox + qa + 2 * si, 1.0, 2.5);
        const double expect = (5 * h + 3 * p + s) * 5.0 / 9.0;
        REQUIRE(sig_h.values()[i] == Catch::Approx(h).margin(1e-9));
        REQUIRE(sig_p.values()[i] == Catch::Approx(p).margin(1e-9));
        REQUIRE(sig_s.values()[i] == Catch::Approx(s).margin(1e-9));
        REQUIRE(mpm.values()[i] == Catch::Approx(expect).margin(1e-9));
    }
}
