#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "prospect/raster.hpp"
#include "prospect/rng.hpp"

using namespace prospect;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "prospect_test_raster";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

Raster small_raster() {
    Raster r("ox", 4, 4, ExtentKm{0, 0, 12, 12});
    for (int i = 0; i < 16; ++i) {
        r.values()[i] = static_cast<double>(static_cast<float>(1.1 + 0.05 * i));
    }
    return r;
}

}  // namespace

TEST_CASE("store then load round-trips values, band, extent") {
    Raster r = small_raster();
    const fs::path stem = temp_dir() / "roundtrip";
    store_raster(r, stem);
    Raster back = load_raster(stem);
    REQUIRE(back.band() == "ox");
    REQUIRE(back.width() == 4);
    REQUIRE(back.height() == 4);
    REQUIRE(back.extent() == r.extent());
    REQUIRE(back.values() == r.values());
}

TEST_CASE("missing sentinel round-trips at the same positions") {
    Raster r = small_raster();
    r.set_missing(0, 1);
    r.set_missing(3, 2);
    const fs::path stem = temp_dir() / "sentinel";
    store_raster(r, stem);
    Raster back = load_raster(stem);
    REQUIRE(back.is_missing(back.at(0, 1)));
    REQUIRE(back.is_missing(back.at(3, 2)));
    REQUIRE(back.missing_count() == 2);
}

TEST_CASE("payload shorter than the header declares is a dimension mismatch") {
    Raster r = small_raster();
    const fs::path stem = temp_dir() / "truncated";
    store_raster(r, stem);
    // Rewrite the payload with 15 floats instead of 16.
    std::ofstream out(stem.string() + ".band", std::ios::binary | std::ios::trunc);
    std::vector<float> vals(15, 1.0f);
    out.write(reinterpret_cast<const char*>(vals.data()), 15 * sizeof(float));
    out.close();
    REQUIRE_THROWS_AS(load_raster(stem), IoError);
}

TEST_CASE("malformed header is rejected") {
    const fs::path stem = temp_dir() / "badhdr";
    store_raster(small_raster(), stem);
    std::ofstream out(stem.string() + ".hdr", std::ios::trunc);
    out << "width 4\nheight nonsense\nband ox\nextent_km 0 0 12 12\nnodata -9999\n";
    out.close();
    REQUIRE_THROWS_AS(load_raster(stem), IoError);
}

TEST_CASE("min_max_normalize maps the range endpoints and midpoint") {
    Raster r("oh", 3, 1, ExtentKm{0, 0, 3, 1});
    r.values() = {2.03, 2.14, 2.25};
    Raster n = min_max_normalize(r, BandRange{"oh", 2.03, 2.25});
    REQUIRE(n.values()[0] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(n.values()[1] == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(n.values()[2] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("min_max_normalize clamps values outside the published range") {
    Raster r("ox", 2, 1, ExtentKm{0, 0, 2, 1});
    r.values() = {0.5, 9.0};
    Raster n = min_max_normalize(r, BandRange{"ox", 1.1, 2.1});
    REQUIRE(n.values()[0] == 0.0);
    REQUIRE(n.values()[1] == 1.0);
}

TEST_CASE("degenerate band range is rejected") {
    Raster r = small_raster();
    REQUIRE_THROWS_AS(min_max_normalize(r, BandRange{"ox", 2.0, 2.0}), DomainError);
}

TEST_CASE("min_max_normalize keeps missing pixels missing") {
    Raster r("ox", 2, 1, ExtentKm{0, 0, 2, 1});
    r.values() = {1.6, r.nodata()};
    Raster n = min_max_normalize(r, BandRange{"ox", 1.1, 2.1});
    REQUIRE(n.is_missing(n.values()[1]));
    REQUIRE(n.values()[0] == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("clipped_norm branches: below, inside, above") {
    Raster r("x", 3, 1, ExtentKm{0, 0, 3, 1});
    r.values() = {0.5, 2.0, 4.0};
    Raster n = clipped_norm(r, 1.0, 3.0);
    REQUIRE(n.values()[0] == 0.0);
    REQUIRE(n.values()[1] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(n.values()[2] == 1.0);
    REQUIRE_THROWS_AS(clipped_norm(r, 3.0, 3.0), DomainError);
}

TEST_CASE("clipped_norm is idempotent after the first application") {
    Rng rng(7);
    Raster r("x", 16, 16, ExtentKm{0, 0, 4, 4});
    for (double& v : r.values()) v = rng.next_double() * 6.0 - 1.0;
    Raster once = clipped_norm(r, 1.0, 3.0);
    Raster twice = clipped_norm(once, 0.0, 1.0);
    for (std::size_t i = 0; i < once.size(); ++i) {
        REQUIRE(twice.values()[i] == Catch::Approx(once.values()[i]).margin(1e-15));
    }
}

TEST_CASE("clipped_norm is monotone") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const double x = rng.next_double() * 8.0 - 2.0;
        const double y = x + rng.next_double() * 3.0;
        REQUIRE(clipped_norm_value(x, 1.0, 3.0) <= clipped_norm_value(y, 1.0, 3.0));
    }
}

TEST_CASE("scalar reference matches the raster operations on random inputs") {
    Rng rng(1234);
    Raster r("ox", 32, 32, ExtentKm{0, 0, 12, 12});
    for (double& v : r.values()) v = 0.9 + rng.next_double() * 1.5;
    const BandRange range{"ox", 1.1, 2.1};
    Raster n = min_max_normalize(r, range);
    Raster c = clipped_norm(r, 1.2, 1.9);
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double x = r.values()[i];
        const double expect_n = std::clamp((x - 1.1) / (2.1 - 1.1), 0.0, 1.0);
        double expect_c = (x - 1.2) / (1.9 - 1.2);
        if (x < 1.2) expect_c = 0.0;
        if (x > 1.9) expect_c = 1.0;
        REQUIRE(n.values()[i] == Catch::Approx(expect_n).margin(1e-9));
        REQUIRE(c.values()[i] == Catch::Approx(expect_c).margin(1e-9));
    }
}
