#include "doctest.h"
#include "rps/quadrature.hpp"

#include <cmath>
#include <random>

using namespace rps;

namespace {
std::vector<double> sample(const RadialGrid& g, double (*f)(double)) {
    std::vector<double> v;
    for (double r : g.nodes) v.push_back(f(r));
    return v;
}
}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("grid shape") {
    const RadialGrid g = make_grid(1.0, 0.1);
    CHECK(g.size() == 11);
    CHECK(g.nodes.front() == 0.0);
    CHECK(g.nodes.back() == doctest::Approx(1.0));
}

TEST_CASE("trapezoid exactness and accuracy") {
    const RadialGrid g = make_grid(1.0, 0.01);
    CHECK(cumulative_integral(sample(g, [](double) { return 1.0; }), g.nodes).back() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cumulative_integral(sample(g, [](double s) { return s; }), g.nodes).back() == doctest::Approx(0.5).epsilon(1e-14));
    const RadialGrid fine = make_grid(1.0, 1e-3);
    const double q = cumulative_integral(sample(fine, [](double s) { return s * s; }), fine.nodes).back();
    CHECK(std::abs(q - 1.0 / 3.0) <= 1e-6);
}

TEST_CASE("cumulative_integral is linear") {
    const RadialGrid g = make_grid(3.0, 1e-2);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> w1(g.size()), w2(g.size()), mix(g.size());
    const double a = 1.7, b = -0.3;
    for (std::size_t i = 0; i < g.size(); ++i) {
        w1[i] = U(rng);
        w2[i] = U(rng);
        mix[i] = a * w1[i] + b * w2[i];
    }
    const auto I1 = cumulative_integral(w1, g.nodes);
    const auto I2 = cumulative_integral(w2, g.nodes);
    const auto Im = cumulative_integral(mix, g.nodes);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(Im[i] - (a * I1[i] + b * I2[i])) <= 1e-12);
}

TEST_CASE("radial kernel values") {
    const RadialGrid g = make_grid(3.0, 1e-3);
    const auto K1 = radial_kernel(sample(g, [](double) { return 1.0; }), 3, g.nodes);
    CHECK(K1.back() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < g.size(); i += 97) CHECK(std::abs(K1[i] - g.nodes[i] / 3.0) <= 1e-8);
    const auto K0 = radial_kernel(std::vector<double>(g.size(), 0.0), 3, g.nodes);
    for (double k : K0) CHECK(k == 0.0);
    const RadialGrid g2 = make_grid(2.0, 1e-3);
    const auto Ks = radial_kernel(sample(g2, [](double s) { return s; }), 3, g2.nodes);
    CHECK(Ks.back() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("weighted mean prefix reduces to the trapezoid at k = 0") {
    const RadialGrid g = make_grid(2.0, 0.05);
    const auto w = sample(g, [](double s) { return std::exp(-s); });
    const auto a = weighted_mean_prefix(w, 0, g.nodes);
    const auto b = cumulative_integral(w, g.nodes);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("interpolation clamps") {
    const std::vector<double> x{0.0, 1.0, 2.0}, y{0.0, 10.0, 30.0};
    CHECK(interpolate(x, y, 0.5) == doctest::Approx(5.0));
    CHECK(interpolate(x, y, 1.5) == doctest::Approx(20.0));
    CHECK(interpolate(x, y, -1.0) == 0.0);
    CHECK(interpolate(x, y, 5.0) == 30.0);
}

TEST_CASE("probe mesh reaches the schedule radii") {
    ProbeSchedule s;
    const ProbeMesh m = make_probe_mesh(s, 16);
    REQUIRE(m.probe_index.size() == static_cast<std::size_t>(s.count));
    for (int k = 0; k < s.count; ++k) CHECK(m.nodes[m.probe_index[k]] == doctest::Approx(s.radius(k)));
    CHECK(s.last_radius() == doctest::Approx(16384.0));
}

TEST_CASE("improper limit probe verdicts") {
    const ProbeSchedule s;
    const auto a = improper_limit_probe([](double R) { return 1.0 - std::exp(-R); }, s, 1e-6, 1e8);
    CHECK(a.finite());
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-6));
    const auto b = improper_limit_probe([](double R) { return std::log1p(R); }, s, 1e-6, 1e8);
    CHECK(b.divergent());
    const auto c = improper_limit_probe([](double R) { return 2.0 - 1.0 / R; }, s, 1e-3, 1e8);
    CHECK(c.finite());
    CHECK(c.value == doctest::Approx(2.0).epsilon(1e-6));
    const auto d = improper_limit_probe([](double R) { return R * R; }, s, 1e-6, 1e8);
    CHECK(d.divergent());
    CHECK(a.probe_values.size() == static_cast<std::size_t>(s.count));
}

TEST_CASE("probe never reports Finite when an increment grows") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<double, double>> trace;
        double F = 0.0, inc = 1.0;
        for (int k = 0; k < 15; ++k) {
            inc *= 0.3 + 0.9 * U(rng);
            F += inc;
            trace.emplace_back(std::ldexp(1.0, k), F);
        }
        const auto v = classify_probe_trace(trace, 1e-3, 1e8);
        if (v.finite()) {
            const std::size_t n = trace.size();
            const double d1 = trace[n - 2].second - trace[n - 3].second;
            const double d2 = trace[n - 1].second - trace[n - 2].second;
            const double d0 = trace[n - 3].second - trace[n - 4].second;
            CHECK(d1 <= d0);
            CHECK(d2 <= d1);
        }
    }
}

}
