#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hx/lattice.hpp"
#include "oracles.hpp"

using namespace hx;

namespace {

Cube unit_cube() {
    Cube q;
    q.shift = GridShift::standard(1);
    q.level = 0;
    q.m = {0};
    return q;
}

LatticeFunction chi(int level, long long lo, long long hi, int denom = 1) {
    LatticeFunction f(1, level, denom);
    for (long long i = lo; i < hi; ++i) f.set_cell({i}, 1.0);
    return f;
}

}  // namespace

TEST_CASE("averages on explicit functions") {
    // constant c on the cube, any p
    LatticeFunction c3 = scale(chi(3, 0, 8), 2.5);
    for (double p : {0.5, 1.0, 2.0, 7.0}) CHECK(average(c3, p, unit_cube()) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(average(c3, std::numeric_limits<double>::infinity(), unit_cube()) == 2.5);

    // chi_{[0,1/2)} on [0,1), p = 2 -> sqrt(1/2)
    LatticeFunction h = chi(3, 0, 4);
    CHECK(average(h, 2.0, unit_cube()) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    // chi_{[0,1/4)}, p = 1 -> 1/4
    LatticeFunction q = chi(3, 0, 2);
    CHECK(average(q, 1.0, unit_cube()) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("lattice mismatch is an error") {
    // a shifted cube cuts the d=1 base cells
    LatticeFunction f = chi(2, 0, 4);
    Cube q;
    q.shift = GridShift(1, {1});
    q.level = 2;
    q.m = {0};
    CHECK_THROWS_WITH(average(f, 1.0, q), "lattice mismatch");

    // with d = 3 the same cube is a union of cells
    LatticeFunction g = chi(2, 0, 12, 3);
    CHECK(average(g, 1.0, q) == doctest::Approx(1.0));
}

TEST_CASE("d=3 lattice is compatible with every shift and level") {
    Rng rng(11);
    LatticeFunction f = oracle::random_fn(rng, 5, 0.2, 3);
    for (int t = 0; t < 3; ++t)
        for (int k = 0; k <= 5; ++k) {
            Cube q;
            q.shift = GridShift(1, {t});
            q.level = k;
            q.m = {0};
            CHECK_NOTHROW(average(f, 1.0, q));
        }
}

TEST_CASE("pairing") {
    LatticeFunction one = chi(4, 0, 16);
    CHECK(pairing(one, one) == doctest::Approx(1.0).epsilon(1e-15));
    LatticeFunction zero(1, 4, 1);
    CHECK(pairing(one, zero) == 0.0);

    // random pairs vs compensated summation
    Rng rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        LatticeFunction f = oracle::random_fn(rng, 6);
        LatticeFunction g = oracle::random_fn(rng, 6);
        long double acc = 0.0L, comp = 0.0L;
        for (long long i = 0; i < 64; ++i) {
            long double term = static_cast<long double>(f.cell({i})) * g.cell({i}) / 64.0L;
            long double y = term - comp;
            long double t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
        CHECK(pairing(f, g) == doctest::Approx(static_cast<double>(acc)).epsilon(1e-12));
    }
}

TEST_CASE("norms and weak norms") {
    Weight one;
    one.fn = chi(4, 0, 16);
    one.domain.lo = {0};
    one.domain.hi = {16};

    LatticeFunction u = chi(4, 0, 16);
    for (double p : {1.0, 2.0, 3.5}) CHECK(lp_norm(u, p, one) == doctest::Approx(1.0));

    // weak norm of an indicator: w(E)^{1/p}
    LatticeFunction h = chi(4, 0, 8);
    CHECK(weak_lp(h, 1.0, one) == doctest::Approx(0.5));
    CHECK(weak_lp(h, 2.0, one) == doctest::Approx(std::sqrt(0.5)));

    // level-set enumeration oracle on random functions
    Rng rng(13);
    for (int rep = 0; rep < 50; ++rep) {
        LatticeFunction f = oracle::random_fn(rng, 4);
        Weight w = oracle::random_weight(rng, 4);
        double p = rng.uniform(0.5, 3.0);
        double best = 0.0;
        for (const auto& [idx, v] : f.cells()) {
            double lam = std::abs(v);
            double mass = 0.0;
            for (const auto& [jdx, u2] : f.cells())
                if (std::abs(u2) >= lam) mass += w.fn.cell(jdx) / 16.0;
            best = std::max(best, lam * std::pow(mass, 1.0 / p));
        }
        CHECK(weak_lp(f, p, w) == doctest::Approx(best).epsilon(1e-12));
        // Chebyshev
        CHECK(weak_lp(f, p, w) <= lp_norm(f, p, w) * (1 + 1e-12));
    }
}

TEST_CASE("conjugate exponent") {
    CHECK(conjugate(2.0) == 2.0);
    CHECK(std::isinf(conjugate(1.0)));
    CHECK(conjugate(std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(conjugate(4.0 / 3.0) == doctest::Approx(4.0));
    CHECK_THROWS(conjugate(0.5));
    for (double p : {1.0, 1.5, 2.0, 3.0, 10.0}) CHECK(conjugate(conjugate(p)) == doctest::Approx(p));
}

TEST_CASE("pointwise ops") {
    LatticeFunction w = chi(3, 0, 8);
    CHECK(power(w, 1.0).cells() == w.cells());
    CHECK(scale(w, 0.0).cells().empty());
    CellRange half{{0}, {4}};
    LatticeFunction r = restrict_to(chi(3, 0, 8), half);
    CHECK(r.cells() == chi(3, 0, 4).cells());
    CHECK_THROWS(power(scale(w, -1.0), 0.5));
    CHECK(indicator(1, 3, 1, half).cells() == chi(3, 0, 4).cells());
}

TEST_CASE("Holder monotonicity of p-averages") {
    Rng rng(14);
    for (int rep = 0; rep < 100; ++rep) {
        LatticeFunction f = oracle::random_fn(rng, 5);
        double p = rng.uniform(0.3, 3.0);
        double q = p + rng.uniform(0.0, 4.0);
        CHECK(average(f, p, unit_cube()) <= average(f, q, unit_cube()) * (1 + 1e-9));
        CHECK(average(f, p, unit_cube()) <=
              average(f, std::numeric_limits<double>::infinity(), unit_cube()) * (1 + 1e-9));
    }
}

TEST_CASE("lattice Holder for the pairing") {
    Rng rng(15);
    Weight one;
    one.fn = chi(5, 0, 32);
    one.domain.lo = {0};
    one.domain.hi = {32};
    for (int rep = 0; rep < 100; ++rep) {
        LatticeFunction f = oracle::random_fn(rng, 5);
        LatticeFunction g = oracle::random_fn(rng, 5);
        double p = rng.uniform(1.01, 5.0);
        double pp = conjugate(p);
        CHECK(lp_norm(multiply(f, g), 1.0, one) <=
              lp_norm(f, p, one) * lp_norm(g, pp, one) * (1 + 1e-9));
    }
}

TEST_CASE("refinement consistency") {
    Rng rng(16);
    LatticeFunction f = oracle::random_fn(rng, 5);
    LatticeFunction fr = f.refined();
    BoundedSystem sys(1, 5);
    for (const Cube& q : sys.all_cubes()) {
        CHECK(average(f, 1.0, q) == doctest::Approx(average(fr, 1.0, q)).epsilon(1e-12));
        CHECK(average(f, 2.0, q) == doctest::Approx(average(fr, 2.0, q)).epsilon(1e-12));
    }
    // computing on a cube equals combining its children
    Cube top = sys.top();
    auto kids = children(top);
    double sum = 0.0;
    for (const Cube& c : kids) sum += average(f, 1.0, c) * cube_measure(c).to_double();
    CHECK(sum == doctest::Approx(average(f, 1.0, top)).epsilon(1e-12));
}

TEST_CASE("weight validation") {
    Weight w;
    w.fn = chi(3, 0, 8);
    w.domain.lo = {0};
    w.domain.hi = {8};
    CHECK_NOTHROW(w.validate());

    Weight bad = w;
    bad.fn.set_cell({3}, 0.0);  // removes the cell -> not total
    CHECK_THROWS(bad.validate());

    Weight neg = w;
    neg.fn.set_cell({3}, -1.0);
    CHECK_THROWS(neg.validate());
}

TEST_CASE("JSON round trip and rejection") {
    Weight w;
    w.fn = chi(2, 0, 4);
    w.fn.set_cell({1}, 2.0);
    w.domain.lo = {0};
    w.domain.hi = {4};
    Weight back = Weight::from_json(w.to_json());
    CHECK(back.fn.cells() == w.fn.cells());
    CHECK(back.domain.lo == w.domain.lo);
    CHECK(back.domain.hi == w.domain.hi);

    CHECK_THROWS(LatticeFunction::from_json("{\"dim\":1,\"level\":2,\"denominator\":1}"));
    // duplicate indices rejected
    CHECK_THROWS(LatticeFunction::from_json(
        "{\"dim\":1,\"level\":2,\"denominator\":1,\"cells\":["
        "{\"idx\":[0],\"value\":1.0},{\"idx\":[0],\"value\":2.0}]}"));
    // nonpositive weight value rejected
    CHECK_THROWS(Weight::from_json(
        "{\"dim\":1,\"level\":0,\"denominator\":1,\"domain\":[[0.0,1.0]],"
        "\"cells\":[{\"idx\":[0],\"value\":-1.0}]}"));
}
