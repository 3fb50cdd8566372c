#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "levysync/sync.hpp"

using namespace levysync;

namespace {

NoiseRealization zero_real(double t_past, double t_future, std::uint64_t seed = 1) {
    return build_two_sided(GeneratingTriplet::scalar(0.0, 0.0), t_past, t_future, 0.5, seed);
}

NoiseRealization ramp_real(double gamma, double t_past, double t_future, std::uint64_t seed = 1) {
    return build_two_sided(GeneratingTriplet::scalar(0.0, gamma), t_past, t_future, 0.5, seed);
}

VectorField affine_x() {
    return [](const std::vector<double>& y) { return std::vector<double>{-(y[0] + 1.0)}; };
}

VectorField affine_y() {
    return [](const std::vector<double>& y) { return std::vector<double>{-(y[0] + 3.0)}; };
}

VectorField linear_drift(double rate) {
    return [rate](const std::vector<double>& y) {
        std::vector<double> out(y.size());
        for (std::size_t c = 0; c < y.size(); ++c) out[c] = -rate * y[c];
        return out;
    };
}

double fixed_x(double lam) { return -(1.0 + 4.0 * lam) / (1.0 + 2.0 * lam); }
double fixed_y(double lam) { return -(3.0 + 4.0 * lam) / (1.0 + 2.0 * lam); }

} // namespace

TEST_CASE("averaged system combines drifts and premixes the noises", "[sync]") {
    const NoiseRealization n1 = ramp_real(1.0, 5.0, 2.0, 11);
    const NoiseRealization n2 = zero_real(5.0, 2.0, 12);

    const CoupledSpec affine{affine_x(), affine_y(), {1.0}, {2.0}, 1.0, &n1, &n2};
    const AssembledSystem avg = averaged_system(affine);
    CHECK(avg.drift({0.0})[0] == Catch::Approx(-2.0).margin(1e-15));
    CHECK(avg.drift({0.5})[0] == Catch::Approx(-2.5).margin(1e-15));
    CHECK(avg.drift({-2.0})[0] == Catch::Approx(0.0).margin(1e-15));

    const CoupledSpec same{linear_drift(1.0), linear_drift(1.0), {1.0}, {3.0}, 0.0, &n1, &n2};
    const AssembledSystem avg2 = averaged_system(same);
    CHECK(avg2.drift({3.0})[0] == Catch::Approx(-3.0).margin(1e-15));
    CHECK(avg2.noise.value1(1.0) == Catch::Approx(0.5).margin(1e-12));

    const CoupledSpec mixed{linear_drift(1.0), linear_drift(2.0), {1.0}, {1.0}, 0.0, &n1, &n2};
    CHECK(averaged_system(mixed).drift({2.0})[0] == Catch::Approx(-3.0).margin(1e-15));
}

TEST_CASE("coupled system stacks the drifts with the restoring force", "[sync]") {
    const NoiseRealization n1 = zero_real(5.0, 2.0, 11);
    const NoiseRealization n2 = zero_real(5.0, 2.0, 12);
    const CoupledSpec cs{affine_x(), affine_y(), {1.0}, {2.0}, 2.0, &n1, &n2};
    const AssembledSystem sys = coupled_system(cs);

    const std::vector<double> out = sys.drift({1.0, 4.0});
    CHECK(out[0] == Catch::Approx(-(1.0 + 1.0) + 2.0 * 3.0).margin(1e-15));
    CHECK(out[1] == Catch::Approx(-(4.0 + 3.0) + 2.0 * -3.0).margin(1e-15));
    REQUIRE(sys.coeff.size() == 2);
    CHECK(sys.coeff[0] == 1.0);
    CHECK(sys.coeff[1] == 2.0);
    CHECK(sys.max_step == Catch::Approx(0.1));

    CoupledSpec bad = cs;
    bad.lambda = -1.0;
    CHECK_THROWS_AS(coupled_system(bad), parameter_error);
    bad = cs;
    bad.beta = {1.0, 2.0};
    CHECK_THROWS_AS(coupled_system(bad), parameter_error);
    bad = cs;
    bad.noise2 = nullptr;
    CHECK_THROWS_AS(coupled_system(bad), parameter_error);
}

TEST_CASE("coupled stationary pair hits the affine fixed points", "[sync]") {
    const NoiseRealization n1 = zero_real(96.0, 1.0, 11);
    const NoiseRealization n2 = zero_real(96.0, 1.0, 12);
    const SimulationGrid grid(-1.0, 1.0, 0.01);

    for (double lam : {1.0, 10.0, 100.0}) {
        const CoupledSpec cs{affine_x(), affine_y(), {1.0}, {2.0}, lam, &n1, &n2};
        const auto [x, y] = coupled_stationary_pair(cs, grid);
        CHECK(shift_values(x.path, -fixed_x(lam)).sup_norm() <= 1e-6);
        CHECK(shift_values(y.path, -fixed_y(lam)).sup_norm() <= 1e-6);
        CHECK(sync_gap(x.path, y.path, -1.0, 1.0) == Catch::Approx(2.0 / (1.0 + 2.0 * lam)).margin(1e-6));
    }

    const CoupledSpec fast{affine_x(), affine_y(), {1.0}, {2.0}, 1000.0, &n1, &n2};
    const auto [x, y] = coupled_stationary_pair(fast, grid);
    CHECK(shift_values(x.path, 2.0).sup_norm() <= 2e-3);
    CHECK(shift_values(y.path, 2.0).sup_norm() <= 2e-3);
}

TEST_CASE("coupled pair at lambda zero decouples exactly", "[sync]") {
    const NoiseRealization n1 = build_two_sided(GeneratingTriplet::brownian(1.0), 48.0, 1.0, 0.01, 101);
    const NoiseRealization n2 = build_two_sided(GeneratingTriplet::brownian(1.0), 48.0, 1.0, 0.01, 102);
    const SimulationGrid grid(0.0, 1.0, 0.01);
    const double horizons[] = {24.0, 40.0};

    const CoupledSpec cs{affine_x(), linear_drift(1.0), {1.0}, {2.0}, 0.0, &n1, &n2};
    const auto [x, y] = coupled_stationary_pair(cs, grid, horizons);

    const AdditiveSdeSpec solo_x{affine_x(), {1.0}, &n1.path};
    const AdditiveSdeSpec solo_y{linear_drift(1.0), {2.0}, &n2.path};
    const StationaryOrbit px = pullback_stationary(solo_x, grid, horizons);
    const StationaryOrbit py = pullback_stationary(solo_y, grid, horizons);
    CHECK(sup_distance(x.path, px.path) == 0.0);
    CHECK(sup_distance(y.path, py.path) == 0.0);
}

TEST_CASE("sync gap measures the worst spread over the window", "[sync]") {
    CadlagPath a(1), b(1);
    a.push_knot(0.0, -5.0 / 3.0);
    a.push_knot(2.0, -5.0 / 3.0);
    b.push_knot(0.0, -7.0 / 3.0);
    b.push_knot(2.0, -7.0 / 3.0);
    CHECK(sync_gap(a, a, 0.0, 2.0) == 0.0);
    CHECK(sync_gap(a, b, 0.0, 2.0) == Catch::Approx(2.0 / 3.0).margin(1e-12));

    CadlagPath c(2);
    c.push_knot(0.0, std::vector<double>{0.0, 0.0});
    c.push_knot(2.0, std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(sync_gap(a, c, 0.0, 2.0), parameter_error);
    CHECK_THROWS_AS(sync_gap(a, b, -1.0, 2.0), path_domain_error);
    CHECK_THROWS_AS(sync_gap(a, b, 1.0, 1.0), parameter_error);
}

TEST_CASE("same noise and symmetric systems stay glued", "[sync]") {
    const auto jumps = JumpMeasureSpec::compound_poisson(2.0, JumpDistribution::normal(0.0, 0.7));
    const NoiseRealization n = build_two_sided(GeneratingTriplet::scalar(0.8, 0.1, jumps), 48.0, 1.0, 0.01, 7);
    const SimulationGrid grid(0.0, 1.0, 0.01);
    const double horizons[] = {24.0, 40.0};

    for (double lam : {0.0, 1.0, 10.0}) {
        const CoupledSpec cs{affine_x(), affine_x(), {1.5}, {1.5}, lam, &n, &n};
        const auto [x, y] = coupled_stationary_pair(cs, grid, horizons);
        CHECK(sync_gap(x.path, y.path, 0.0, 1.0) == 0.0);
    }
}

TEST_CASE("contraction stays within the stepping tolerance", "[sync]") {
    const SimulationGrid grid(0.0, 2.0, 1e-3);
    const NoiseRealization n1 = sample_levy_path(GeneratingTriplet::brownian(1.0), grid, 31);
    const NoiseRealization n2 = sample_levy_path(GeneratingTriplet::brownian(1.0), grid, 32);
    const VectorField cubic = [](const std::vector<double>& y) {
        return std::vector<double>{-y[0] - y[0] * y[0] * y[0]};
    };

    struct Case {
        VectorField f, g;
    };
    const Case cases[] = {{affine_x(), affine_y()}, {linear_drift(1.0), linear_drift(1.0)},
                          {cubic, linear_drift(2.0)}};
    const std::vector<double> a0{0.0, 0.0};
    const std::vector<double> b0{2.0, 1.0};
    for (const Case& c : cases) {
        const DissipativityEstimate ef = estimate_dissipativity(c.f, 10.0, 256, 0x0dd5ba11);
        const DissipativityEstimate eg = estimate_dissipativity(c.g, 10.0, 256, 0x0dd5ba11);
        const double l = std::min(ef.l_hat, eg.l_hat);
        for (double lam : {0.0, 1.0, 10.0}) {
            const CoupledSpec cs{c.f, c.g, {1.0}, {2.0}, lam, &n1, &n2};
            const double worst = contraction_check(cs, a0, b0, grid, l);
            CHECK(worst >= 1.0);
            CHECK(worst <= 1.0 + 50.0 * 1e-3);
        }
    }

    const CoupledSpec cs{affine_x(), affine_y(), {1.0}, {2.0}, 1.0, &n1, &n2};
    CHECK_THROWS_AS(contraction_check(cs, a0, a0, grid, 1.0), parameter_error);
    CHECK_THROWS_AS(contraction_check(cs, a0, b0, grid, 0.0), parameter_error);
    CHECK_THROWS_AS(contraction_check(cs, {0.0}, b0, grid, 1.0), parameter_error);
}

TEST_CASE("absorption radius reproduces the constant-integrand value", "[sync]") {
    const NoiseRealization n1 = zero_real(140.0, 1.0, 11);
    const NoiseRealization n2 = zero_real(140.0, 1.0, 12);
    const SimulationGrid grid(-40.0, 0.0, 0.01);
    const CoupledSpec cs{affine_x(), affine_y(), {1.0}, {2.0}, 1.0, &n1, &n2};
    const auto [x, y] = coupled_stationary_pair(cs, grid);

    const double w = 2.0 * (1.0 - std::exp(-20.0));
    const double oracle = std::sqrt(1.0 + 4.0 * (74.0 / 9.0) * w);
    CHECK(absorption_radius(cs, x.path, y.path, 0.0, 1.0) == Catch::Approx(oracle).margin(1e-4));

    const double convenience = absorption_radius(cs, 0.0, grid);
    CHECK(convenience == Catch::Approx(absorption_radius(cs, x.path, y.path, 0.0, x.lambda)).epsilon(1e-12));

    CHECK_THROWS_AS(absorption_radius(cs, x.path, y.path, 0.0, 0.0), parameter_error);
    CHECK_THROWS_AS(absorption_radius(cs, x.path, y.path, 5.0, 1.0), path_domain_error);
}

TEST_CASE("absorption radius scales quadratically in the drift", "[sync]") {
    const NoiseRealization n1 = ramp_real(1.0, 140.0, 1.0, 11);
    const NoiseRealization n2 = ramp_real(1.0, 140.0, 1.0, 12);
    const SimulationGrid grid(-40.0, 0.0, 0.01);
    const CoupledSpec cs{affine_x(), affine_y(), {1.0}, {2.0}, 0.0, &n1, &n2};
    const auto [x, y] = coupled_stationary_pair(cs, grid);
    CHECK(shift_values(x.path, 0.0).sup_norm() <= 1e-6);      // equilibrium 0
    CHECK(shift_values(y.path, 1.0).sup_norm() <= 1e-6);      // equilibrium -1

    const VectorField f2 = [](const std::vector<double>& v) {
        return std::vector<double>{-2.0 * (v[0] + 1.0)};
    };
    const VectorField f0 = [](const std::vector<double>&) { return std::vector<double>{0.0}; };
    const CoupledSpec cs2{f2, affine_y(), {1.0}, {2.0}, 0.0, &n1, &n2};
    const CoupledSpec cs0{f0, affine_y(), {1.0}, {2.0}, 0.0, &n1, &n2};

    const double rf = absorption_radius(cs, x.path, y.path, 0.0, 1.0);
    const double r2 = absorption_radius(cs2, x.path, y.path, 0.0, 1.0);
    const double r0 = absorption_radius(cs0, x.path, y.path, 0.0, 1.0);
    CHECK(rf >= 1.0);
    CHECK(r0 >= 1.0);
    const double f_term = rf * rf - r0 * r0;
    const double f_term_doubled = r2 * r2 - r0 * r0;
    CHECK(f_term_doubled == Catch::Approx(4.0 * f_term).epsilon(1e-6));

    const double w = 2.0 * (1.0 - std::exp(-20.0));
    CHECK(rf == Catch::Approx(std::sqrt(1.0 + 20.0 * w)).margin(1e-3));
}

TEST_CASE("hausdorff semidistance is one-sided", "[sync]") {
    using Points = std::vector<std::vector<double>>;
    const Points a{{0.0}, {10.0}};
    const Points b{{0.0}};
    CHECK(hausdorff_semidistance(a, a) == 0.0);
    CHECK(hausdorff_semidistance(a, b) == 10.0);
    CHECK(hausdorff_semidistance(b, a) == 0.0);
    CHECK(hausdorff_semidistance({{0.0}}, {{3.0}}) == 3.0);
    CHECK(hausdorff_semidistance({{0.0, 0.0}}, {{3.0, 4.0}}) == Catch::Approx(5.0));
    CHECK_THROWS_AS(hausdorff_semidistance({}, b), parameter_error);
    CHECK_THROWS_AS(hausdorff_semidistance(a, {}), parameter_error);
}

TEST_CASE("sweep reproduces the deterministic decay ladder", "[sync]") {
    SweepConfig cfg;
    cfg.f = affine_x();
    cfg.g = affine_y();
    cfg.alpha = {1.0};
    cfg.beta = {2.0};
    cfg.triplet1 = GeneratingTriplet::scalar(0.0, 0.0);
    cfg.triplet2 = GeneratingTriplet::scalar(0.0, 0.0);
    cfg.lambda_values = {1.0, 10.0, 100.0};
    cfg.dt = 0.01;
    cfg.seeds = {1, 2, 3};
    const SyncReport rep = run_sync_sweep(cfg);

    REQUIRE(rep.rows.size() == 9);
    CHECK(rep.rows[0].seed == 1);
    CHECK(rep.rows[1].lambda == 10.0);
    CHECK(rep.rows[3].seed == 2);
    for (std::size_t li = 0; li < 3; ++li) {
        const double lam = cfg.lambda_values[li];
        CHECK(rep.gap[li] == Catch::Approx(2.0 / (1.0 + 2.0 * lam)).margin(1e-6));
        CHECK(rep.gap_max[li] == rep.gap[li]);
        CHECK(rep.contraction_margin[li] <= 1.0 + 50.0 * cfg.dt);
        CHECK(rep.absorption_radius[li] >= 1.0);
    }
    CHECK(rep.skorohod_to_avg[0] == Catch::Approx(std::sqrt(2.0) / 3.0).margin(2e-3));
    CHECK(rep.skorohod_to_avg[1] < rep.skorohod_to_avg[0]);
    CHECK(rep.skorohod_to_avg[2] < rep.skorohod_to_avg[1]);
}

TEST_CASE("sweep with shared noise and equal systems reports zero gap", "[sync]") {
    SweepConfig cfg;
    cfg.f = affine_x();
    cfg.g = affine_x();
    cfg.alpha = {1.0};
    cfg.beta = {1.0};
    cfg.lambda_values = {1.0, 10.0};
    cfg.dt = 0.01;
    cfg.seeds = {5};
    cfg.share_noise = true;
    const SyncReport rep = run_sync_sweep(cfg);
    for (const SyncRow& row : rep.rows) CHECK(row.gap == 0.0);
}

TEST_CASE("sweep output is deterministic across thread counts", "[sync]") {
    SweepConfig cfg;
    cfg.f = affine_x();
    cfg.g = affine_y();
    cfg.alpha = {1.0};
    cfg.beta = {2.0};
    cfg.lambda_values = {1.0, 10.0};
    cfg.t2 = 1.0;
    cfg.dt = 0.02;
    cfg.seeds = {1, 2, 3};
    cfg.metric_tol = 1e-2;

    const SyncReport a = run_sync_sweep(cfg);
    cfg.threads = 3;
    const SyncReport b = run_sync_sweep(cfg);

    std::ostringstream ra, rb, sa, sb;
    write_sync_rows_csv(ra, a);
    write_sync_rows_csv(rb, b);
    write_sync_summary_csv(sa, a);
    write_sync_summary_csv(sb, b);
    CHECK(ra.str() == rb.str());
    CHECK(sa.str() == sb.str());
    CHECK(ra.str().substr(0, ra.str().find('\n')) ==
          "seed,lambda,gap,skorohod_x,skorohod_y,contraction_margin,absorption_radius");
    CHECK(sa.str().substr(0, sa.str().find('\n')) ==
          "lambda,gap,skorohod_to_avg,contraction_margin,absorption_radius,gap_max,skorohod_max");
}

TEST_CASE("sweep validates its configuration", "[sync]") {
    SweepConfig cfg;
    cfg.f = affine_x();
    cfg.g = affine_y();
    cfg.alpha = {1.0};
    cfg.beta = {2.0};
    cfg.dt = 0.01;

    SweepConfig bad = cfg;
    bad.lambda_values = {10.0, 1.0};
    CHECK_THROWS_WITH(run_sync_sweep(bad), Catch::Matchers::ContainsSubstring("lambda_values"));
    bad = cfg;
    bad.seeds.clear();
    CHECK_THROWS_AS(run_sync_sweep(bad), parameter_error);
    bad = cfg;
    bad.t2 = bad.t1;
    CHECK_THROWS_AS(run_sync_sweep(bad), parameter_error);
    bad = cfg;
    bad.f = [](const std::vector<double>& y) { return std::vector<double>{y[0]}; };
    CHECK_THROWS_AS(run_sync_sweep(bad), parameter_error);
}

TEST_CASE("gap ordering holds across brownian seeds", "[sync]") {
    SweepConfig cfg;
    cfg.f = affine_x();
    cfg.g = affine_y();
    cfg.alpha = {1.0};
    cfg.beta = {2.0};
    cfg.lambda_values = {10.0, 100.0};
    cfg.dt = 0.02;
    cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    cfg.metric_tol = 1e-2;
    const SyncReport rep = run_sync_sweep(cfg);

    int ordered = 0;
    for (std::size_t si = 0; si < cfg.seeds.size(); ++si)
        if (rep.rows[si * 2 + 1].gap < rep.rows[si * 2].gap) ++ordered;
    CHECK(ordered >= 9);
    CHECK(rep.gap[1] < rep.gap[0]);
    CHECK(rep.skorohod_to_avg[1] < rep.skorohod_to_avg[0]);
}

TEST_CASE("paper example pair matches the coupled anchors", "[sync]") {
    const NoiseRealization zn1 = zero_real(96.0, 1.0, 11);
    const NoiseRealization zn2 = zero_real(96.0, 1.0, 12);
    const SimulationGrid grid(0.0, 1.0, 0.01);

    const auto [ox, oy] = paper_example_pair(1.0, zn1.path, zn2.path, grid);
    CHECK(shift_values(ox.path, 5.0 / 3.0).sup_norm() <= 1e-9);
    CHECK(shift_values(oy.path, 7.0 / 3.0).sup_norm() <= 1e-9);

    const auto jumps = JumpMeasureSpec::compound_poisson(2.0, JumpDistribution::normal(0.0, 0.5));
    const NoiseRealization n1 = build_two_sided(GeneratingTriplet::scalar(1.0, 0.0, jumps), 96.0, 1.0, 0.01, 41);
    const NoiseRealization n2 = build_two_sided(GeneratingTriplet::brownian(1.0), 96.0, 1.0, 0.01, 42);
    for (double lam : {1.0, 10.0}) {
        const CoupledSpec cs{affine_x(), affine_y(), {1.0}, {2.0}, lam, &n1, &n2};
        const auto [x, y] = coupled_stationary_pair(cs, grid);
        const auto [cx, cy] = paper_example_pair(lam, n1.path, n2.path, grid);
        CHECK(sup_distance(x.path, cx.path) <= 0.1);
        CHECK(sup_distance(y.path, cy.path) <= 0.1);
    }
}
