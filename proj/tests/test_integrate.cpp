#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "levysync/integrate.hpp"

using namespace levysync;

namespace {

// exact X(t) for dX = -lam X dt + dL over a realized piecewise-affine path:
// cellwise closed form of the convolution integral plus discounted jumps
double ou_exact(const CadlagPath& L, double lam, double x0, double t) {
    double x = x0 * std::exp(-lam * (t - L.t_begin()));
    for (std::size_t i = 0; i < L.size(); ++i) {
        const double u = L.time(i);
        if (u > t) break;
        if (L.is_jump(i) && u > L.t_begin())
            x += std::exp(-lam * (t - u)) * (L.right(i)[0] - L.left(i)[0]);
        if (i + 1 < L.size() && u < t) {
            const double v = std::min(L.time(i + 1), t);
            const double g = (L.left(i + 1)[0] - L.right(i)[0]) / (L.time(i + 1) - u);
            x += g * (std::exp(-lam * (t - v)) - std::exp(-lam * (t - u))) / lam;
        }
    }
    return x;
}

VectorField zero_field() {
    return [](const std::vector<double>& y) { return std::vector<double>(y.size(), 0.0); };
}

} // namespace

TEST_CASE("additive integrator reproduces pure drift noise", "[integrate]") {
    NoiseRealization noise = sample_levy_path(GeneratingTriplet::scalar(0.0, 1.0), SimulationGrid(0.0, 1.0, 0.01), 1);
    AdditiveSdeSpec spec{zero_field(), {1.0}, &noise.path};
    CadlagPath y = integrate_additive(spec, SimulationGrid(0.0, 1.0, 0.01), {0.0});
    CHECK(y.value1(1.0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("additive integrator tracks exponential decay", "[integrate]") {
    NoiseRealization noise = sample_levy_path(GeneratingTriplet::scalar(0.0, 0.0), SimulationGrid(0.0, 1.0, 1e-3), 1);
    AdditiveSdeSpec spec{[](const std::vector<double>& y) { return std::vector<double>{-y[0]}; }, {0.0}, &noise.path};
    CadlagPath y = integrate_additive(spec, SimulationGrid(0.0, 1.0, 1e-3), {1.0});
    CHECK(y.value1(1.0) == Catch::Approx(std::exp(-1.0)).margin(1e-3));
}

TEST_CASE("affine drift settles at its fixed point", "[integrate]") {
    NoiseRealization noise = sample_levy_path(GeneratingTriplet::scalar(0.0, 0.0), SimulationGrid(0.0, 5.0, 1e-3), 1);
    AdditiveSdeSpec spec{[](const std::vector<double>& y) { return std::vector<double>{-(y[0] + 1.0)}; },
                         {1.0},
                         &noise.path};
    CadlagPath y = integrate_additive(spec, SimulationGrid(0.0, 5.0, 1e-3), {0.0});
    CHECK(y.value1(5.0) == Catch::Approx(-1.0).margin(1e-2));
}

TEST_CASE("output jumps sit at the exact noise jump times", "[integrate]") {
    const auto jumps = JumpMeasureSpec::compound_poisson(5.0, JumpDistribution::normal(0.0, 1.0));
    NoiseRealization noise =
        sample_levy_path(GeneratingTriplet::scalar(0.5, 0.2, jumps), SimulationGrid(0.0, 2.0, 0.01), 42);
    AdditiveSdeSpec spec{[](const std::vector<double>& y) { return std::vector<double>{-y[0]}; }, {2.0}, &noise.path};
    CadlagPath y = integrate_additive(spec, SimulationGrid(0.0, 2.0, 0.01), {0.0});

    const auto noise_jumps = noise.path.jump_times();
    const auto out_jumps = y.jump_times();
    REQUIRE(noise_jumps.size() >= 3);
    REQUIRE(out_jumps.size() == noise_jumps.size());
    for (std::size_t i = 0; i < out_jumps.size(); ++i) {
        CHECK(out_jumps[i] == noise_jumps[i]); // bitwise, no grid snapping
        const double dl = noise.path.value1(noise_jumps[i]) - noise.path.left1(noise_jumps[i]);
        const double dy = y.value1(out_jumps[i]) - y.left1(out_jumps[i]);
        CHECK(dy == Catch::Approx(2.0 * dl).margin(1e-14));
    }
}

TEST_CASE("halving dt halves the strong error against the exact convolution", "[integrate]") {
    const auto jumps = JumpMeasureSpec::compound_poisson(2.0, JumpDistribution::uniform(-1.0, 1.0));
    const GeneratingTriplet triplet = GeneratingTriplet::scalar(0.25, 0.3, jumps);
    const double lam = 1.0;

    double mean_err[3] = {0.0, 0.0, 0.0};
    const double dts[3] = {0.02, 0.01, 0.005};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        NoiseRealization noise = sample_levy_path(triplet, SimulationGrid(0.0, 1.0, 0.01), 100 + seed);
        AdditiveSdeSpec spec{[](const std::vector<double>& y) { return std::vector<double>{-y[0]}; },
                             {1.0},
                             &noise.path};
        for (int k = 0; k < 3; ++k) {
            const SimulationGrid grid(0.0, 1.0, dts[k]);
            CadlagPath y = integrate_additive(spec, grid, {0.5});
            double err = 0.0;
            for (std::int64_t n = 1; n <= grid.n_cells(); ++n) {
                const double t = grid.node(n);
                err = std::max(err, std::abs(y.value1(t) - ou_exact(noise.path, lam, 0.5, t)));
            }
            mean_err[k] += err / 20.0;
        }
    }
    INFO("errors " << mean_err[0] << " " << mean_err[1] << " " << mean_err[2]);
    CHECK(mean_err[1] <= 0.55 * mean_err[0]);
    CHECK(mean_err[2] <= 0.55 * mean_err[1]);
}

TEST_CASE("integration commutes with restarting on shifted noise", "[integrate]") {
    const auto jumps = JumpMeasureSpec::compound_poisson(3.0, JumpDistribution::normal(0.0, 0.5));
    NoiseRealization noise =
        sample_levy_path(GeneratingTriplet::scalar(1.0, 0.1, jumps), SimulationGrid(0.0, 2.0, 0.01), 9);
    auto f = [](const std::vector<double>& y) { return std::vector<double>{-y[0]}; };
    AdditiveSdeSpec whole{f, {1.0}, &noise.path};
    CadlagPath combined = integrate_additive(whole, SimulationGrid(0.0, 2.0, 0.01), {1.0});

    CadlagPath first = integrate_additive(whole, SimulationGrid(0.0, 0.5, 0.01), {1.0});
    CadlagPath shifted = noise.path.shift(0.5);
    AdditiveSdeSpec rest{f, {1.0}, &shifted};
    CadlagPath second = integrate_additive(rest, SimulationGrid(0.0, 1.5, 0.01), {first.value1(0.5)});

    double worst = 0.0;
    for (int k = 0; k <= 150; ++k) {
        const double u = 0.01 * k;
        worst = std::max(worst, std::abs(second.value1(u) - combined.value1(0.5 + u)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("substepping changes internals only and converges to the same limit", "[integrate]") {
    NoiseRealization noise = sample_levy_path(GeneratingTriplet::scalar(1.0, 0.0), SimulationGrid(0.0, 1.0, 0.01), 3);
    auto f = [](const std::vector<double>& y) { return std::vector<double>{-50.0 * y[0]}; };
    AdditiveSdeSpec coarse{f, {1.0}, &noise.path};
    AdditiveSdeSpec fine{f, {1.0}, &noise.path, 1e-4};
    const SimulationGrid grid(0.0, 1.0, 0.01);
    CadlagPath yc = integrate_additive(coarse, grid, {1.0});
    CadlagPath yf = integrate_additive(fine, grid, {1.0});
    CHECK(yc.size() == yf.size());
    // lam*dt = 0.5: plain EM is stable but crude; substeps must land near the
    // exact convolution of the realized path
    const double exact = ou_exact(noise.path, 50.0, 1.0, 1.0);
    CHECK(std::abs(yf.value1(1.0) - exact) < std::abs(yc.value1(1.0) - exact) + 1e-12);
    CHECK(yf.value1(1.0) == Catch::Approx(exact).margin(5e-3));
}

TEST_CASE("divergence guard reports the blow-up time", "[integrate]") {
    NoiseRealization noise = sample_levy_path(GeneratingTriplet::scalar(0.0, 0.0), SimulationGrid(0.0, 1.0, 1e-3), 1);
    AdditiveSdeSpec spec{[](const std::vector<double>& y) { return std::vector<double>{y[0] * y[0] * y[0]}; },
                         {0.0},
                         &noise.path};
    CHECK_THROWS_AS(integrate_additive(spec, SimulationGrid(0.0, 1.0, 1e-3), {2.0}), divergence_error);
}

TEST_CASE("additive argument validation", "[integrate]") {
    NoiseRealization noise = sample_levy_path(GeneratingTriplet::scalar(1.0, 0.0), SimulationGrid(0.0, 1.0, 0.01), 1);
    AdditiveSdeSpec spec{zero_field(), {1.0}, &noise.path};
    CHECK_THROWS_AS(integrate_additive(spec, SimulationGrid(0.0, 2.0, 0.01), {0.0}), path_domain_error);
    CHECK_THROWS_AS(integrate_additive(spec, SimulationGrid(0.0, 1.0, 0.01), {0.0, 0.0}), parameter_error);
    AdditiveSdeSpec nof{{}, {1.0}, &noise.path};
    CHECK_THROWS_AS(integrate_additive(nof, SimulationGrid(0.0, 1.0, 0.01), {0.0}), parameter_error);
    AdditiveSdeSpec nopath{zero_field(), {1.0}, nullptr};
    CHECK_THROWS_AS(integrate_additive(nopath, SimulationGrid(0.0, 1.0, 0.01), {0.0}), parameter_error);
}

TEST_CASE("scripted large jump passes through", "[integrate]") {
    GeneralSdeSpec spec;
    spec.triplet = GeneratingTriplet::scalar(0.0, 0.0);
    spec.large_jump = [](const std::vector<double>&, double x) { return std::vector<double>{x}; };
    spec.cutoff = 1.0;
    spec.scripted_jumps = {{0.5, 2.0}};
    CadlagPath y = integrate_general(spec, SimulationGrid(0.0, 1.0, 0.01), {0.0}, 1);
    CHECK(y.value1(1.0) == 2.0);
    CHECK(y.value1(0.49) == 0.0);
    const auto jt = y.jump_times();
    REQUIRE(jt.size() == 1);
    CHECK(jt[0] == 0.5);
}

TEST_CASE("jump coefficients see the left-limit state", "[integrate]") {
    GeneralSdeSpec spec;
    spec.triplet = GeneratingTriplet::scalar(0.0, 0.0);
    spec.large_jump = [](const std::vector<double>& y, double x) { return std::vector<double>{y[0] * x}; };
    spec.cutoff = 0.5;
    spec.scripted_jumps = {{0.5, 1.0}};
    CadlagPath y = integrate_general(spec, SimulationGrid(0.0, 1.0, 0.01), {1.0}, 1);
    CHECK(y.left1(0.5) == 1.0);
    CHECK(y.value1(0.5) == 2.0); // 1 + G(1, 1)
    CHECK(y.value1(1.0) == 2.0);
}

TEST_CASE("general drift decays without noise", "[integrate]") {
    GeneralSdeSpec spec;
    spec.triplet = GeneratingTriplet::scalar(0.0, 0.0);
    spec.b = [](const std::vector<double>& y) { return std::vector<double>{-y[0]}; };
    CadlagPath y = integrate_general(spec, SimulationGrid(0.0, 1.0, 1e-3), {1.0}, 1);
    CHECK(y.value1(1.0) == Catch::Approx(std::exp(-1.0)).margin(1e-3));
}

TEST_CASE("diffusion scales linearly in sigma for a fixed seed", "[integrate]") {
    GeneralSdeSpec one;
    one.triplet = GeneratingTriplet::scalar(1.0, 0.0);
    one.sigma = [](const std::vector<double>&) { return std::vector<double>{1.0}; };
    GeneralSdeSpec two = one;
    two.sigma = [](const std::vector<double>&) { return std::vector<double>{2.0}; };
    CadlagPath y1 = integrate_general(one, SimulationGrid(0.0, 1.0, 0.01), {0.0}, 11);
    CadlagPath y2 = integrate_general(two, SimulationGrid(0.0, 1.0, 0.01), {0.0}, 11);
    CHECK(y2.value1(1.0) == Catch::Approx(2.0 * y1.value1(1.0)).margin(1e-12));
    CHECK(y1.value1(1.0) != 0.0);
}

TEST_CASE("small jumps are compensated against the size law", "[integrate]") {
    // law uniform(0, 0.5), rate 4, all sizes below the cutoff: the channel
    // mean is 4 * E[x] = 1, so a single scripted jump of 0.3 nets 0.3 - t
    GeneralSdeSpec spec;
    spec.triplet = GeneratingTriplet::scalar(0.0, 0.0,
                                             JumpMeasureSpec::compound_poisson(4.0, JumpDistribution::uniform(0.0, 0.5)));
    spec.small_jump = [](const std::vector<double>&, double x) { return std::vector<double>{x}; };
    spec.cutoff = 1.0;
    spec.scripted_jumps = {{0.5, 0.3}};
    CadlagPath y = integrate_general(spec, SimulationGrid(0.0, 1.0, 0.01), {0.0}, 1);
    CHECK(y.value1(1.0) == Catch::Approx(0.3 - 1.0).margin(1e-9));
    CHECK(y.value1(0.25) == Catch::Approx(-0.25).margin(1e-9));
}

TEST_CASE("stable channel in the general form matches the sampled law path", "[integrate]") {
    const GeneratingTriplet triplet = GeneratingTriplet::scalar(0.0, 0.0, JumpMeasureSpec::alpha_stable(1.5, 1.0));
    const SimulationGrid grid(0.0, 1.0, 0.01);
    GeneralSdeSpec spec;
    spec.triplet = triplet;
    CadlagPath y = integrate_general(spec, grid, {0.0}, 17);
    NoiseRealization noise = sample_levy_path(triplet, grid, 17);
    for (std::int64_t k = 0; k <= grid.n_cells(); k += 10)
        CHECK(y.value1(grid.node(k)) == Catch::Approx(noise.path.value1(grid.node(k))).margin(1e-12));
}

TEST_CASE("general form capability limits", "[integrate]") {
    GeneralSdeSpec stable;
    stable.triplet = GeneratingTriplet::scalar(0.0, 0.0, JumpMeasureSpec::alpha_stable(1.5, 1.0));
    stable.large_jump = [](const std::vector<double>&, double x) { return std::vector<double>{x}; };
    CHECK_THROWS_AS(integrate_general(stable, SimulationGrid(0.0, 1.0, 0.01), {0.0}, 1), capability_error);

    GeneralSdeSpec nohandler;
    nohandler.triplet = GeneratingTriplet::scalar(0.0, 0.0);
    nohandler.large_jump = [](const std::vector<double>&, double x) { return std::vector<double>{x}; };
    nohandler.cutoff = 1.0;
    nohandler.scripted_jumps = {{0.5, 0.2}}; // small jump, no small-jump coefficient
    CHECK_THROWS_AS(integrate_general(nohandler, SimulationGrid(0.0, 1.0, 0.01), {0.0}, 1), capability_error);

    GeneralSdeSpec outside;
    outside.triplet = GeneratingTriplet::scalar(0.0, 0.0);
    outside.large_jump = [](const std::vector<double>&, double x) { return std::vector<double>{x}; };
    outside.scripted_jumps = {{1.5, 2.0}};
    CHECK_THROWS_AS(integrate_general(outside, SimulationGrid(0.0, 1.0, 0.01), {0.0}, 1), parameter_error);
}

TEST_CASE("dissipativity estimate is exact for linear and shifted drifts", "[integrate]") {
    auto linear = [](const std::vector<double>& y) { return std::vector<double>{-y[0]}; };
    DissipativityEstimate e1 = estimate_dissipativity(linear, 2.0, 500, 1);
    CHECK(e1.l_hat == Catch::Approx(1.0).margin(1e-12));
    CHECK_FALSE(e1.violated);
    CHECK(e1.sample_count == 500);

    auto shifted = [](const std::vector<double>& y) { return std::vector<double>{-(y[0] + 3.0)}; };
    DissipativityEstimate e2 = estimate_dissipativity(shifted, 2.0, 500, 1);
    CHECK(e2.l_hat == Catch::Approx(1.0).margin(1e-12));

    auto cubic = [](const std::vector<double>& y) { return std::vector<double>{-y[0] * y[0] * y[0] - y[0]}; };
    DissipativityEstimate e3 = estimate_dissipativity(cubic, 2.0, 4000, 1);
    CHECK(e3.l_hat >= 0.99);
    CHECK(e3.l_hat <= 1.01);

    auto unstable = [](const std::vector<double>& y) { return std::vector<double>{y[0]}; };
    DissipativityEstimate e4 = estimate_dissipativity(unstable, 2.0, 100, 1);
    CHECK(e4.l_hat == Catch::Approx(-1.0).margin(1e-12));
    CHECK(e4.violated);
}

TEST_CASE("linear growth probe separates bounded from quadratic drifts", "[integrate]") {
    auto linear = [](const std::vector<double>& y) { return std::vector<double>{-y[0]}; };
    auto unit_sigma = [](const std::vector<double>&) { return std::vector<double>{1.0}; };
    GrowthCheck ok = check_linear_growth(linear, unit_sigma, 1.0, 400, 1);
    CHECK(ok.bounded);
    CHECK(ok.worst_ratio <= 2.0);

    auto quad = [](const std::vector<double>& y) { return std::vector<double>{y[0] * y[0]}; };
    GrowthCheck bad = check_linear_growth(quad, {}, 1.0, 400, 1);
    CHECK_FALSE(bad.bounded);

    GrowthCheck trivial = check_linear_growth(zero_field(), {}, 1.0, 50, 1);
    CHECK(trivial.bounded);
    CHECK(trivial.worst_ratio == 0.0);
}
