#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "cachenet/mc.hpp"
#include "cachenet/model.hpp"
#include "cachenet/scdp_mm.hpp"

using namespace cachenet;

namespace {

MuTierConfig mu_cfg(int antennas = 2) {
    MuTierConfig cfg;
    cfg.antennas = antennas;
    cfg.intercept = free_space_intercept(1e9);
    cfg.noise_w = thermal_noise_w(1e7);
    return cfg;
}

MmTierConfig mm_cfg() {
    MmTierConfig cfg;
    cfg.intercept = free_space_intercept(60e9);
    cfg.noise_w = thermal_noise_w(1e9);
    return cfg;
}

}  // namespace

TEST_CASE("sample_hppp basics") {
    SplitMix64 rng = substream(5, 0);
    CHECK(sample_hppp(0.0, 1000.0, rng).empty());

    // Fixed seed reproduces the point set.
    SplitMix64 a = substream(17, 3), b = substream(17, 3);
    const auto pa = sample_hppp(600e-6, 500.0, a);
    const auto pb = sample_hppp(600e-6, 500.0, b);
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i].x == pb[i].x);
        CHECK(pa[i].y == pb[i].y);
    }
    for (const auto& p : pa) CHECK(p.x * p.x + p.y * p.y <= 500.0 * 500.0);
}

TEST_CASE("sample_hppp mean count converges") {
    const double density = 600e-6, radius = 2000.0;
    const double expected = density * M_PI * radius * radius;  // ~7540
    double total = 0.0;
    const int draws = 1000;
    for (int i = 0; i < draws; ++i) {
        SplitMix64 rng = substream(123, i);
        total += static_cast<double>(sample_hppp(density, radius, rng).size());
    }
    CHECK(total / draws == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("simulate_scdp_mu trivial limits") {
    const auto cfg = mu_cfg();
    McParams params;
    params.drops = 2000;

    CHECK(simulate_scdp_mu(0.0, cfg, 0.028, params).mean == 0.0);

    // A vanishing threshold always passes once a caching SBS exists.
    const auto est = simulate_scdp_mu(1.0, cfg, 1e-12, params);
    CHECK(est.mean == doctest::Approx(1.0));
}

TEST_CASE("simulate_scdp_mu determinism across modes and runs") {
    const auto cfg = mu_cfg();
    const double phi = sinr_threshold({4e5}, 1e7);
    McParams serial;
    serial.drops = 4000;
    serial.seed = 99;
    serial.mode = ExecMode::Serial;
    McParams parallel = serial;
    parallel.mode = ExecMode::Parallel;

    const auto a = simulate_scdp_mu(0.5, cfg, phi, serial);
    const auto b = simulate_scdp_mu(0.5, cfg, phi, parallel);
    const auto c = simulate_scdp_mu(0.5, cfg, phi, parallel);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(b.mean == c.mean);

    McParams other = serial;
    other.seed = 100;
    CHECK(simulate_scdp_mu(0.5, cfg, phi, other).mean != a.mean);
}

TEST_CASE("simulate_scdp_mm determinism and window guard") {
    const auto cfg = mm_cfg();
    const double phi = sinr_threshold({4e5}, 1e9);
    McParams params;
    params.drops = 5000;
    params.seed = 7;

    const auto a = simulate_scdp_mm(0.4, cfg, phi, params);
    const auto b = simulate_scdp_mm(0.4, cfg, phi, params);
    CHECK(a.mean == b.mean);

    McParams tiny = params;
    tiny.window_radius_m = 5.0;
    CHECK_THROWS_AS(simulate_scdp_mm(0.4, cfg, phi, tiny), std::invalid_argument);
}

TEST_CASE("mm simulation matches the closed forms") {
    const auto cfg = mm_cfg();
    const double phi = sinr_threshold({4e5}, 1e9);
    const MmCoverageContext ctx(cfg, phi);
    McParams params;
    params.drops = 20000;
    params.seed = 31;

    for (double b = 0.1; b <= 1.0 + 1e-9; b += 0.1) {
        const auto est = simulate_scdp_mm(b, cfg, phi, params);
        const double want = scdp_content_mm(b, ctx);
        // When every drop succeeds the sample error is 0; fall back to the
        // binomial zero-count bound.
        const double tol = 3.0 * est.std_error + 4.0 / params.drops;
        CHECK(std::fabs(est.mean - want) <= tol);
    }
}

TEST_CASE("standard error scales as one over sqrt of drops") {
    const auto cfg = mm_cfg();
    const double phi = sinr_threshold({4e5}, 1e9);
    McParams small;
    small.drops = 2000;
    small.seed = 11;
    McParams big = small;
    big.drops = 32000;

    // b small enough that the success probability is far from 1.
    const auto se_small = simulate_scdp_mm(0.08, cfg, phi, small).std_error;
    const auto se_big = simulate_scdp_mm(0.08, cfg, phi, big).std_error;
    CHECK(se_small / se_big == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("doubling the window moves the estimate by less than one std error") {
    const auto cfg = mu_cfg();
    const double phi = sinr_threshold({4e5}, 1e7);
    McParams base;
    base.drops = 5000;
    base.seed = 13;
    base.window_radius_m = 2000.0;
    McParams wide = base;
    wide.window_radius_m = 4000.0;

    const auto a = simulate_scdp_mu(0.5, cfg, phi, base);
    const auto b = simulate_scdp_mu(0.5, cfg, phi, wide);
    CHECK(std::fabs(a.mean - b.mean) <= std::max(a.std_error, b.std_error));
}

TEST_CASE("antithetic pairing keeps the estimate consistent") {
    const auto cfg = mu_cfg();
    const double phi = sinr_threshold({4e5}, 1e7);
    McParams plain;
    plain.drops = 6000;
    plain.seed = 5;
    McParams anti = plain;
    anti.antithetic = true;

    const auto pa = simulate_scdp_mu(0.6, cfg, phi, plain);
    const auto pb = simulate_scdp_mu(0.6, cfg, phi, anti);
    CHECK(pb.drops_used == 6000);
    // Same quantity, so the two estimates agree within combined errors.
    const double se = std::hypot(pa.std_error, pb.std_error);
    CHECK(std::fabs(pa.mean - pb.mean) <= 4.0 * se);
}

TEST_CASE("simulate_total degenerate catalogs") {
    const auto mu = mu_cfg();
    const auto mm = mm_cfg();
    const double phi_mu = sinr_threshold({4e5}, 1e7);
    const double phi_mm = sinr_threshold({4e5}, 1e9);

    McParams params;
    params.drops = 6000;
    params.seed = 21;

    // Single content cached everywhere: the catalog draw is a no-op.
    const auto lib1 = ContentLibrary::create(1, 1, {1.0});
    PlacementVector all_one;
    all_one.b = {1.0};
    const auto total = simulate_total(all_one, lib1, mu, phi_mu, mm, phi_mm, params);
    const auto direct_mu = simulate_scdp_mu(1.0, mu, phi_mu, params);
    const auto direct_mm = simulate_scdp_mm(1.0, mm, phi_mm, params);
    CHECK(std::fabs(total.mu.mean - direct_mu.mean) <=
          3.0 * std::hypot(total.mu.std_error, direct_mu.std_error));
    CHECK(std::fabs(total.mm.mean - direct_mm.mean) <=
          3.0 * std::hypot(total.mm.std_error, direct_mm.std_error));

    // Uniform popularity with a flat placement equals the per-content value.
    const auto lib4 = ContentLibrary::create(4, 2, zipf_popularity(4, 0.0));
    PlacementVector flat;
    flat.b.assign(4, 0.5);
    const auto t4 = simulate_total(flat, lib4, mu, phi_mu, mm, phi_mm, params);
    const auto d4 = simulate_scdp_mm(0.5, mm, phi_mm, params);
    CHECK(std::fabs(t4.mm.mean - d4.mean) <=
          3.0 * std::hypot(t4.mm.std_error, d4.std_error));
}
