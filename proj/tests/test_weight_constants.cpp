#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hx/calibration.hpp"
#include "hx/exponents.hpp"
#include "hx/lab.hpp"
#include "hx/weight_constants.hpp"
#include "oracles.hpp"

using namespace hx;

TEST_CASE("constants of the flat weight are 1") {
    Weight one = uniform_weight(1, 4, 1);
    auto fam = dyadic_family(one);
    for (double p : {1.0, 1.5, 2.0, 4.0}) CHECK(a_p(one, p, fam).value == doctest::Approx(1.0));
    CHECK(a_infty_wilson(one, fam).value == doctest::Approx(1.0));
    for (double s : {1.0, 2.0, 3.0}) CHECK(rh(one, s, fam).value == doctest::Approx(1.0));
}

TEST_CASE("two-step weight exact constants") {
    Weight w = two_step_weight(4);
    auto fam = dyadic_family(w);
    // sup at [0,1): (3/2) * (3/4) = 9/8
    auto a2 = a_p(w, 2.0, fam);
    CHECK(a2.value == doctest::Approx(9.0 / 8.0).epsilon(1e-12));
    CHECK(a2.attaining.level == 0);
    // A_1 = (3/2)/1
    CHECK(a_p(w, 1.0, fam).value == doctest::Approx(1.5).epsilon(1e-12));
    // RH_2 = sqrt(5/2)/(3/2) = sqrt(10)/3
    CHECK(rh(w, 2.0, fam).value == doctest::Approx(std::sqrt(10.0) / 3.0).epsilon(1e-12));
    CHECK(rh(w, 1.0, fam).value == 1.0);
    // Wilson constant sits between 1 and A_2
    double ai = a_infty_wilson(w, fam).value;
    CHECK(ai >= 1.0);
    CHECK(ai <= a_p(w, 2.0, fam).value * Calibration::active().c_cal);
}

TEST_CASE("brute-force oracle agreement on random weights") {
    Rng rng(31);
    for (int rep = 0; rep < 40; ++rep) {
        Weight w = oracle::random_weight(rng, 5);
        auto fam = dyadic_family(w);
        for (double p : {1.0, 2.0, 3.0})
            CHECK(a_p(w, p, fam).value == doctest::Approx(oracle::naive_ap(w, p, fam)).epsilon(1e-9));
        for (double s : {2.0, 3.0})
            CHECK(rh(w, s, fam).value == doctest::Approx(oracle::naive_rh(w, s, fam)).epsilon(1e-9));
        CHECK(a_infty_wilson(w, fam).value ==
              doctest::Approx(oracle::naive_wilson(w, fam)).epsilon(1e-9));
    }
}

TEST_CASE("A_p monotone in p, Wilson controlled by A_p") {
    Rng rng(32);
    double c_cal = Calibration::active().c_cal;
    for (int rep = 0; rep < 50; ++rep) {
        Weight w = oracle::random_weight(rng, 5);
        auto fam = dyadic_family(w);
        // [w]_{A_p} <= [w]_{A_q} for q < p
        double prev = a_p(w, 1.0, fam).value;
        for (double p : {1.5, 2.0, 3.0, 5.0}) {
            double cur = a_p(w, p, fam).value;
            CHECK(cur <= prev * (1 + 1e-12));
            prev = cur;
        }
        double ai = a_infty_wilson(w, fam).value;
        for (double p : {1.0, 2.0, 3.0}) CHECK(ai <= c_cal * a_p(w, p, fam).value);
    }
}

TEST_CASE("constants are scale invariant and refinement stable") {
    Rng rng(33);
    Weight w = oracle::random_weight(rng, 4);
    Weight w2;
    w2.fn = scale(w.fn, 2.0);
    w2.domain = w.domain;
    auto fam = dyadic_family(w);
    auto fam2 = dyadic_family(w2);
    CHECK(a_p(w, 2.0, fam).value == a_p(w2, 2.0, fam2).value);
    CHECK(a_p(w, 1.0, fam).value == a_p(w2, 1.0, fam2).value);
    CHECK(rh(w, 2.0, fam).value == rh(w2, 2.0, fam2).value);
    CHECK(a_infty_wilson(w, fam).value == doctest::Approx(a_infty_wilson(w2, fam2).value).epsilon(1e-12));

    Weight wr;
    wr.fn = w.fn.refined();
    wr.domain.lo = {0};
    wr.domain.hi = {2 * w.domain.hi[0]};
    auto famr = dyadic_family(wr);
    CHECK(a_p(wr, 2.0, famr).value == doctest::Approx(a_p(w, 2.0, fam).value).epsilon(1e-12));
    CHECK(rh(wr, 3.0, famr).value == doctest::Approx(rh(w, 3.0, fam).value).epsilon(1e-12));
    CHECK(a_infty_wilson(wr, famr).value ==
          doctest::Approx(a_infty_wilson(w, fam).value).epsilon(1e-12));
}

TEST_CASE("psi cases") {
    Weight one = uniform_weight(1, 3, 1);
    const double loge1 = std::log(std::exp(1.0) + 1.0);
    CHECK(psi(one, ExponentPair(1.0, hx::ex::inf)) == doctest::Approx(loge1).epsilon(1e-12));
    CHECK(psi(one, ExponentPair(2.0, hx::ex::inf)) == doctest::Approx(loge1).epsilon(1e-12));
    CHECK(psi(one, ExponentPair(1.0, 2.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psi(one, ExponentPair(2.0, 4.0)) == doctest::Approx(1.0).epsilon(1e-12));

    // two-step weight, all four branches finite and >= 1-ish
    Weight w = two_step_weight(4);
    for (auto ep : {ExponentPair(1.0, hx::ex::inf), ExponentPair(2.0, hx::ex::inf), ExponentPair(1.0, 2.0),
                    ExponentPair(2.0, 4.0)}) {
        double v = psi(w, ep);
        CHECK(std::isfinite(v));
        CHECK(v > 1.0);
    }
}

TEST_CASE("thm11_rhs and atwo_rhs") {
    Weight one = uniform_weight(1, 3, 1);
    ExponentPair oneinf(1.0, hx::ex::inf);
    CHECK(thm11_rhs(one, 2.0, oneinf) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(atwo_rhs(one, 2.0, oneinf) == doctest::Approx(1.0));
    CHECK(atwo_rhs(one, 3.0, ExponentPair(2.0, 4.0)) == doctest::Approx(1.0));

    Weight w = two_step_weight(4);
    // thm11_rhs >= c_p since all constants >= 1
    CHECK(thm11_rhs(w, 2.0, oneinf) >= c_p(2.0, oneinf));
    CHECK(std::isfinite(atwo_rhs(w, 1.5, ExponentPair(1.0, 2.0))));
}

TEST_CASE("prop 2.2(ii)") {
    Weight one = uniform_weight(1, 3, 1);
    auto c = prop22_ii_check(one, 2.0, 2.0);
    CHECK(c.lhs == doctest::Approx(1.0));
    CHECK(c.rhs == doctest::Approx(1.0));
    CHECK(c.pass);

    Weight w = two_step_weight(4);
    CHECK(prop22_ii_check(w, 2.0, 2.0).pass);

    Rng rng(34);
    for (int rep = 0; rep < 50; ++rep) {
        Weight rw = oracle::random_weight(rng, 4, 1.0);
        for (double p : {1.0, 2.0})
            for (double s : {2.0, 3.0}) CHECK(prop22_ii_check(rw, p, s).pass);
    }
}

TEST_CASE("holweight both lines") {
    Cube top;
    top.shift = GridShift::standard(1);
    top.level = 0;
    top.m = {0};

    Weight one = uniform_weight(1, 3, 1);
    LatticeFunction u = indicator(1, 3, 1, one.domain);
    auto eq = holweight_check(u, u, one, 1.0, 1.0, top);
    CHECK(eq.line1.lhs == doctest::Approx(eq.line1.rhs));  // equality at f=g=w=1
    CHECK(eq.pass);

    Weight w = two_step_weight(3);
    LatticeFunction f(1, 3, 1);
    for (long long i = 0; i < 4; ++i) f.set_cell({i}, 1.0);
    CHECK(holweight_check(f, u, w, 1.0, 2.0, top).pass);

    Rng rng(35);
    for (int rep = 0; rep < 200; ++rep) {
        Weight rw = oracle::random_weight(rng, 4);
        LatticeFunction rf = oracle::random_fn(rng, 4);
        LatticeFunction rg = oracle::random_fn(rng, 4);
        double p = rng.uniform(1.0, 3.0);
        double q = p + rng.uniform(0.0, 2.0);
        auto res = holweight_check(rf, rg, rw, p, q, top);
        CHECK(res.pass);
    }
}

TEST_CASE("report serialization") {
    Weight w = two_step_weight(3);
    auto fam = dyadic_family(w);
    ConstantsReport rep;
    rep.entries.push_back(a_p(w, 2.0, fam));
    rep.entries.push_back(rh(w, 2.0, fam));
    std::string csv = rep.to_csv();
    CHECK(csv.find("A_p") != std::string::npos);
    CHECK(csv.find("RH_s") != std::string::npos);
    std::string js = rep.to_json();
    CHECK(js.find("\"attaining\"") != std::string::npos);
}
