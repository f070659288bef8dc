#include "doctest.h"

#include <cmath>
#include <complex>

#include "wso/classifier.hpp"

using namespace wso;

namespace {

Classification classify_w(const std::vector<double>& weights, Complex lambda) {
    const int m = static_cast<int>(weights.size()) - 1;
    return classify(simplex_graph(m, weights), lambda);
}

}  // namespace

TEST_CASE("annulus and circles") {
    Annulus a = annulus({1.0, 3.0, 2.0});
    CHECK(a.r == 1.0);
    CHECK(a.R == 3.0);
    Annulus single = annulus({5.0});
    CHECK(single.r == 5.0);
    CHECK(single.R == 5.0);
    Annulus equal = annulus({2.0, 2.0, 2.0});
    CHECK(equal.r == 2.0);
    CHECK(equal.R == 2.0);
    CHECK_THROWS_AS(annulus({1.0, -2.0}), ValidationError);
    CHECK_THROWS_AS(annulus({1.0, 0.0}), ValidationError);

    CHECK(circles({1.0, 3.0, 2.0}) == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(circles({2.0, 2.0, 2.0}) == std::vector<double>{2.0});
}

TEST_CASE("weight order and the threshold count") {
    WeightOrder wo = weight_order({1.0, 3.0, 2.0}, 1.5);
    CHECK(wo.order == std::vector<int>{0, 2, 1});
    CHECK(wo.below_count == 1);
    CHECK_THROWS_AS(weight_order({1.0, 2.0, 2.0}, 1.5), ValidationError);
}

TEST_CASE("graph classifier on the (1,3,2) family") {
    const Complex rot = std::polar(1.5, 3.14159 / 7.0);
    Classification right = classify_w({1.0, 3.0, 2.0}, rot);
    CHECK(right.status == ClassStatus::RightInvertible);
    CHECK(right.kernel == KernelVerdict::InfiniteDim);
    CHECK(right.range == RangeVerdict::Closed);
    CHECK(right.provenance == Provenance::Both);

    Classification circ = classify_w({1.0, 3.0, 2.0}, {2.0, 0.0});
    CHECK(circ.status == ClassStatus::OnCircle);
    CHECK(circ.circle_hits == std::vector<int>{2});
    CHECK(circ.range == RangeVerdict::NotClosed);  // boundary circle |a(Fm)|

    Classification outside = classify_w({1.0, 3.0, 2.0}, {3.5, 0.0});
    CHECK(outside.status == ClassStatus::OutsideSpectrum);
    CHECK(outside.kernel == KernelVerdict::Zero);
    CHECK(outside.range == RangeVerdict::Closed);

    Classification mixed = classify_w({1.0, 3.0, 2.0}, {2.5, 0.0});
    CHECK(mixed.status == ClassStatus::NotOneSided);
    CHECK(mixed.kernel == KernelVerdict::Zero);  // refined by the simplex cases
    CHECK(mixed.range == RangeVerdict::DenseNotClosed);

    // decreasing weights: simplex cases do not apply, Main Theorem only
    Classification left = classify_w({3.0, 2.0, 1.0}, {1.5, 0.0});
    CHECK(left.status == ClassStatus::LeftInvertible);
    CHECK(left.kernel == KernelVerdict::Zero);
    CHECK(left.range == RangeVerdict::ClosedNotDense);
    CHECK(left.provenance == Provenance::MainTheorem);
}

TEST_CASE("simplex case classifier") {
    Classification right = classify_simplex({1.0, 3.0, 2.0}, {1.5, 0.0});
    CHECK(right.status == ClassStatus::RightInvertible);
    CHECK(right.kernel == KernelVerdict::InfiniteDim);
    CHECK(right.provenance == Provenance::SimplexTheorem);

    Classification three = classify_simplex({1.0, 3.0, 2.0}, {2.5, 0.0});
    CHECK(three.status == ClassStatus::NotOneSided);
    CHECK(three.kernel == KernelVerdict::Zero);
    CHECK(three.range == RangeVerdict::DenseNotClosed);

    Classification boundary = classify_simplex({1.0, 2.0, 3.0}, {1.0, 0.0});
    CHECK(boundary.status == ClassStatus::OnCircle);
    CHECK(boundary.range == RangeVerdict::NotClosed);

    // saddle circle above the middle band keeps a trivial kernel
    Classification saddle_circle = classify_simplex({1.0, 3.0, 2.0}, {3.0, 0.0});
    CHECK(saddle_circle.status == ClassStatus::OnCircle);
    CHECK(saddle_circle.kernel == KernelVerdict::Zero);
    CHECK(saddle_circle.range == RangeVerdict::DenseNotClosed);

    // saddle circle inside the middle band keeps the infinite kernel
    Classification mid_circle = classify_simplex({1.0, 2.0, 3.0}, {2.0, 0.0});
    CHECK(mid_circle.status == ClassStatus::OnCircle);
    CHECK(mid_circle.kernel == KernelVerdict::InfiniteDim);
    CHECK(mid_circle.range == RangeVerdict::DenseNotClosed);

    CHECK_THROWS_AS(classify_simplex({1.0, 2.0, 2.0}, {1.5, 0.0}), ValidationError);
    CHECK_THROWS_AS(classify_simplex({3.0, 2.0, 1.0}, {1.5, 0.0}), ValidationError);
}

TEST_CASE("classifier consistency: graph route vs case route") {
    Prng rng(42);
    int checked = 0;
    while (checked < 300) {
        const int m = 1 + static_cast<int>(rng.below(4));
        std::vector<double> w(static_cast<std::size_t>(m) + 1);
        for (auto& x : w) x = rng.uniform(0.5, 4.0);
        if (!(w.front() < w.back())) continue;
        bool distinct = true;
        for (std::size_t i = 0; i < w.size() && distinct; ++i)
            for (std::size_t j = i + 1; j < w.size(); ++j)
                if (w[i] == w[j]) { distinct = false; break; }
        if (!distinct) continue;

        const double L = rng.uniform(0.25, 4.5);
        bool near_circle = false;
        for (double x : w)
            if (std::abs(x - L) < 1e-6) near_circle = true;
        if (near_circle) continue;

        Classification g = classify(simplex_graph(m, w), {L, 0.0});
        Classification s = classify_simplex(w, {L, 0.0});
        CHECK(g.status == s.status);
        CHECK(g.kernel == s.kernel);
        CHECK(g.range == s.range);
        ++checked;
    }
}

TEST_CASE("phase invariance and scale equivariance") {
    Prng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(3));
        std::vector<double> w(static_cast<std::size_t>(m) + 1);
        for (auto& x : w) x = rng.uniform(0.5, 4.0);
        FixedPointGraph graph = simplex_graph(m, w);
        const double L = rng.uniform(0.25, 4.5);

        Classification base = classify(graph, {L, 0.0});
        const double theta = rng.uniform(0.0, 6.28318);
        Classification rotated = classify(graph, std::polar(L, theta));
        CHECK(base.status == rotated.status);
        CHECK(base.kernel == rotated.kernel);
        CHECK(base.range == rotated.range);

        const double scale = rng.uniform(0.5, 2.0);
        std::vector<double> ws = w;
        for (auto& x : ws) x *= scale;
        FixedPointGraph scaled = simplex_graph(m, ws);
        Classification sc = classify(scaled, {scale * L, 0.0});
        CHECK(base.status == sc.status);
        CHECK(base.kernel == sc.kernel);
        CHECK(base.range == sc.range);

        // boundary property: outside iff strictly off the ring
        Annulus ring = annulus(w);
        if (base.status == ClassStatus::OutsideSpectrum)
            CHECK((L < ring.r || L > ring.R));
        if (L > ring.r && L < ring.R) CHECK(base.status != ClassStatus::OutsideSpectrum);

        // trichotomy: both partition sides nonempty forbids NoCross on the
        // (connected) tournament
        Decomposition dec = decompose(graph, L);
        if (dec.valid() && !dec.g_minus.empty() && !dec.g_plus.empty())
            CHECK(orientation(graph, dec) != Orientation::NoCross);

        // structural invariants of the verdict
        switch (base.status) {
            case ClassStatus::OutsideSpectrum:
                CHECK(base.kernel == KernelVerdict::Zero);
                CHECK(base.range == RangeVerdict::Closed);
                break;
            case ClassStatus::RightInvertible:
                CHECK(base.kernel == KernelVerdict::InfiniteDim);
                CHECK(base.range == RangeVerdict::Closed);
                break;
            case ClassStatus::LeftInvertible:
                CHECK(base.kernel == KernelVerdict::Zero);
                CHECK((base.range == RangeVerdict::Closed ||
                       base.range == RangeVerdict::ClosedNotDense));
                break;
            case ClassStatus::NotOneSided:
            case ClassStatus::OnCircle:
                // dense orbit class: no one-sided inverse means no closed range
                CHECK((base.range == RangeVerdict::NotClosed ||
                       base.range == RangeVerdict::DenseNotClosed));
                break;
        }
    }
}

TEST_CASE("reduced coefficient from the Radon-Nikodym density") {
    MapModel m1 = MapModel::simplex(1, make_mobius(2.0));
    CoeffFn a = reduced_coefficient(Expr::parse("1", 0).with_arity(1), m1);

    CHECK(a({0.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(a({1.0}) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    // measure oracle: mu(gamma^{-1}[0,eps]) / eps approximates rho(0)
    const double eps = 1e-7;
    const double rho0_fd = m1.gamma().inverse(eps) / eps;
    CHECK(radon_nikodym(m1, {0.0}) == doctest::Approx(rho0_fd).epsilon(1e-6));
    CHECK(radon_nikodym(m1, {1.0}) == doctest::Approx(2.0).epsilon(1e-12));

    // product density on the simplex: rho((0,1)) = (1/2) * 2 = 1
    MapModel m2 = MapModel::simplex(2, make_mobius(2.0));
    CHECK(radon_nikodym(m2, {0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CoeffFn a2 = reduced_coefficient(Expr::parse("1", 0).with_arity(2), m2);
    CHECK(a2({0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(reduced_coefficient(Expr::parse("x1", 1), m2), ValidationError);
}

TEST_CASE("spectral radius estimate concentrates at the heaviest fixed point") {
    Prng rng(42);
    MapModel m1 = MapModel::simplex(1, make_mobius(2.0));

    CoeffFn constant = [](const Point&) { return 2.5; };
    CHECK(spectral_radius_estimate(m1, constant, 50, rng) ==
          doctest::Approx(2.5).epsilon(1e-12));

    CoeffFn affine = [](const Point& x) { return 1.0 + x[0]; };
    const double est1 = spectral_radius_estimate(m1, affine, 200, rng);
    CHECK(est1 == doctest::Approx(2.0).epsilon(0.02));

    // simplex m=2 with corner values (1, 3, 2): the saddle weight dominates
    // and is reachable only through the face orbits
    MapModel m2 = MapModel::simplex(2, make_mobius(2.0));
    CoeffFn corner = [](const Point& x) { return 1.0 - x[0] + 2.0 * x[1]; };
    const double est2 = spectral_radius_estimate(m2, corner, 200, rng);
    CHECK(est2 == doctest::Approx(3.0).epsilon(0.02));

    // growing windows do not overshoot the fixed-point maximum
    const double est_short = spectral_radius_estimate(m2, corner, 50, rng);
    CHECK(est_short <= 3.0 + 1e-9);
    CHECK(est2 <= 3.0 + 1e-9);
}
