#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "hx/calibration.hpp"
#include "hx/exponents.hpp"
#include "hx/lab.hpp"
#include "hx/sparse.hpp"
#include "oracles.hpp"

using namespace hx;

namespace {

Cube std_cube(int level, long long m) {
    Cube q;
    q.shift = GridShift::standard(1);
    q.level = level;
    q.m = {m};
    return q;
}

LatticeFunction chi(int level, long long lo, long long hi) {
    LatticeFunction f(1, level, 1);
    for (long long i = lo; i < hi; ++i) f.set_cell({i}, 1.0);
    return f;
}

SparseFormSpec mk_spec(SparseCollection s, double p0, double q0, double c = 1.0) {
    SparseFormSpec spec;
    spec.collection = std::move(s);
    spec.exponents = ExponentPair(p0, q0);
    spec.scale = c;
    return spec;
}

}  // namespace

TEST_CASE("verify_sparse") {
    LatticeFunction lattice(1, 4, 1);

    // pairwise disjoint -> 1-sparse with E_Q = Q
    SparseCollection disj;
    disj.cubes = {std_cube(2, 0), std_cube(2, 1), std_cube(1, 1)};
    auto v1 = verify_sparse(disj.cubes, 1.0, lattice);
    CHECK(v1.ok);
    CHECK(v1.worst_fraction == doctest::Approx(1.0));
    for (size_t i = 0; i < disj.cubes.size(); ++i)
        CHECK(v1.witness[i].size() == lattice.range_of_cube(disj.cubes[i]).count());

    // nested pair: E_{[0,1)} = [1/2,1), E_{[0,1/2)} = [0,1/2); 1/2-sparse
    SparseCollection nest;
    nest.cubes = {std_cube(0, 0), std_cube(1, 0)};
    auto v2 = verify_sparse(nest.cubes, 0.5, lattice);
    CHECK(v2.ok);
    CHECK(v2.worst_fraction == doctest::Approx(0.5));

    // full tree of depth L: fails at eta = 1/2 (internal E_Q are empty)
    SparseCollection tree = full_tree_collection(3);
    auto v3 = verify_sparse(tree.cubes, 0.5, lattice);
    CHECK(!v3.ok);
    CHECK(v3.witness.empty());

    // witness disjointness within the grid
    auto v4 = verify_sparse(chain_collection(4).cubes, 0.5, lattice);
    CHECK(v4.ok);
    std::set<CellIdx> seen;
    for (auto& [qi, cells] : v4.witness)
        for (auto& c : cells) CHECK(seen.insert(c).second);
}

TEST_CASE("carleson") {
    CHECK(carleson({std_cube(2, 0), std_cube(2, 3), std_cube(3, 4)}) == doctest::Approx(1.0));
    for (int L : {2, 3, 5}) {
        CHECK(carleson(full_tree_collection(L).cubes) == doctest::Approx(static_cast<double>(L + 1)));
        // matches the independent accumulation oracle
        CHECK(carleson(full_tree_collection(L).cubes) ==
              doctest::Approx(oracle::naive_carleson(full_tree_collection(L).cubes)));
    }

    // random stopping-time families have Carleson constant <= 2: children of
    // a selected cube are only selected two levels down, halving the mass
    Rng rng(71);
    LatticeFunction lattice(1, 8, 1);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Cube> fam;
        std::vector<Cube> frontier = {std_cube(0, 0)};
        while (!frontier.empty()) {
            std::vector<Cube> next;
            for (const Cube& q : frontier) {
                fam.push_back(q);
                if (q.level + 2 > 8) continue;
                // pick at most one grandchild per child: total measure <= 1/2 |Q|
                for (const Cube& c : children(q)) {
                    auto gc = children(c);
                    if (rng.next_double() < 0.7)
                        next.push_back(gc[static_cast<size_t>(rng.next_below(2))]);
                }
            }
            frontier = next;
        }
        double lam = carleson(fam);
        CHECK(lam <= 2.0 + 1e-12);
        CHECK(lam == doctest::Approx(oracle::naive_carleson(fam)).epsilon(1e-12));
        // verify_sparse succeeds with eta >= 1/Lambda on these families
        auto v = verify_sparse(fam, 0.5, lattice);
        CHECK(v.ok);
    }
}

TEST_CASE("sparse_form explicit") {
    LatticeFunction one = chi(4, 0, 16);
    auto single = mk_spec(SparseCollection{{std_cube(0, 0)}, 1.0, {}}, 1.0, ex::inf);
    CHECK(sparse_form(single, one, one) == doctest::Approx(1.0));

    auto two = mk_spec(SparseCollection{{std_cube(0, 0), std_cube(1, 0)}, 0.5, {}}, 1.0, ex::inf);
    CHECK(sparse_form(two, one, one) == doctest::Approx(1.5));

    // random inputs vs naive double loop
    Rng rng(72);
    for (int rep = 0; rep < 30; ++rep) {
        LatticeFunction f = oracle::random_fn(rng, 5);
        LatticeFunction g = oracle::random_fn(rng, 5);
        auto spec = mk_spec(full_tree_collection(4), 1.0, 2.0, 0.7);
        double expect = 0.0;
        for (const Cube& q : spec.collection.cubes)
            expect += oracle::naive_average(f, 1.0, q) * oracle::naive_average(g, 2.0, q) *
                      cube_measure(q).to_double();
        expect *= 0.7;
        CHECK(sparse_form(spec, f, g) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("sparse_form monotone and homogeneous") {
    Rng rng(73);
    LatticeFunction f = oracle::random_fn(rng, 5);
    LatticeFunction g = oracle::random_fn(rng, 5);
    auto small = mk_spec(chain_collection(3), 1.0, 2.0);
    auto big = mk_spec(chain_collection(5), 1.0, 2.0);
    CHECK(sparse_form(small, f, g) <= sparse_form(big, f, g) * (1 + 1e-12));
    CHECK(sparse_form(small, scale(f, 3.0), g) == doctest::Approx(3.0 * sparse_form(small, f, g)));
    CHECK(sparse_form(small, f, scale(g, 3.0)) == doctest::Approx(3.0 * sparse_form(small, f, g)));
    LatticeFunction f2 = add(f, chi(5, 0, 32));
    CHECK(sparse_form(small, f, g) <= sparse_form(small, f2, g) * (1 + 1e-12));
}

TEST_CASE("sparse_operator") {
    LatticeFunction one = chi(2, 0, 4);
    SparseCollection single{{std_cube(0, 0)}, 1.0, {}};
    CHECK(sparse_operator(single, 1.0, one).cells() == one.cells());

    // full depth-2 tree on chi_{[0,1/4)}: staircase 7/4, 3/4, 1/4
    SparseCollection tree = full_tree_collection(2);
    LatticeFunction f = chi(2, 0, 1);
    LatticeFunction af = sparse_operator(tree, 1.0, f);
    CHECK(af.cell({0}) == doctest::Approx(1.75));
    CHECK(af.cell({1}) == doctest::Approx(0.75));
    CHECK(af.cell({2}) == doctest::Approx(0.25));
    CHECK(af.cell({3}) == doctest::Approx(0.25));

    // linearity at p0 = 1 for nonnegative inputs
    Rng rng(74);
    LatticeFunction a = oracle::random_fn(rng, 4);
    LatticeFunction b = oracle::random_fn(rng, 4);
    LatticeFunction lhs = sparse_operator(tree, 1.0, add(a, b));
    LatticeFunction rhs = add(sparse_operator(tree, 1.0, a), sparse_operator(tree, 1.0, b));
    for (const auto& [idx, v] : lhs.cells()) CHECK(v == doctest::Approx(rhs.cell(idx)).epsilon(1e-12));

    // pairing with g equals the (p0, q0=inf) form and is dominated by any q0
    LatticeFunction g = oracle::random_fn(rng, 4);
    auto inf_spec = mk_spec(tree, 1.0, ex::inf);
    CHECK(pairing(sparse_operator(tree, 1.0, a), g) ==
          doctest::Approx(sparse_form(inf_spec, a, g)).epsilon(1e-12));
    auto q2_spec = mk_spec(tree, 1.0, 2.0);
    CHECK(sparse_form(inf_spec, a, g) <= sparse_form(q2_spec, a, g) * (1 + 1e-12));
}

TEST_CASE("intermedmax with the explicit eta^{-1} constant") {
    LatticeFunction one = chi(3, 0, 8);
    auto single = mk_spec(SparseCollection{{std_cube(0, 0)}, 1.0, {}}, 1.0, ex::inf);
    auto c = intermedmax_check(single, one, one, 1.0);
    CHECK(c.pass);
    CHECK(c.lhs == doctest::Approx(1.0));
    CHECK(c.rhs >= 1.0);

    Rng rng(75);
    int done = 0;
    while (done < 200) {
        LatticeFunction f = oracle::random_fn(rng, 5);
        LatticeFunction g = oracle::random_fn(rng, 5);
        if (f.cells().empty() || g.cells().empty()) continue;
        double beta = rng.uniform(0.05, 1.0);
        int pick = done % 3;
        SparseFormSpec spec = (pick == 0)   ? mk_spec(chain_collection(5), 1.0, ex::inf, 1.0)
                              : (pick == 1) ? mk_spec(chain_collection(5), 1.0, 2.0, 1.0)
                                            : mk_spec(chain_collection(5), 2.0, 4.0, 1.0);
        spec.collection.eta = 0.5;
        auto r = intermedmax_check(spec, f, g, beta);
        CHECK(r.pass);
        ++done;
    }

    CHECK_THROWS(intermedmax_check(single, one, one, 1.5));
}

TEST_CASE("main lemma with frozen constant") {
    double c_lem = Calibration::active().c_lem;
    LatticeFunction one = chi(4, 0, 16);
    Weight uw = uniform_weight(1, 4, 1);
    auto spec = mk_spec(chain_collection(4), 1.0, ex::inf);
    auto r = lemma_main_check(spec, one, one, uw, 2.0, 2.0, c_lem);
    CHECK(r.pass);
    CHECK(r.ratio > 0.0);

    Rng rng(76);
    int done = 0;
    while (done < 100) {
        LatticeFunction f = oracle::random_fn(rng, 4);
        LatticeFunction g = oracle::random_fn(rng, 4);
        if (f.cells().empty() || g.cells().empty()) continue;
        Weight w = oracle::random_weight(rng, 4);
        double p = rng.uniform(1.2, 4.0);
        double q = rng.uniform(1.2, 3.0);
        auto spec2 = mk_spec(chain_collection(4), 1.0, ex::inf);
        CHECK(lemma_main_check(spec2, f, g, w, p, q, c_lem).pass);
        ++done;
    }

    // homogeneity: the ratio is invariant under w -> 2w
    LatticeFunction f = oracle::random_fn(rng, 4);
    if (f.cells().empty()) f = one;
    Weight w = oracle::random_weight(rng, 4);
    Weight w2{scale(w.fn, 2.0), w.domain};
    auto a = lemma_main_check(spec, f, one, w, 2.0, 2.0, c_lem);
    auto b = lemma_main_check(spec, f, one, w2, 2.0, 2.0, c_lem);
    CHECK(a.ratio == doctest::Approx(b.ratio).epsilon(1e-12));
}

TEST_CASE("strong norm estimate") {
    Weight one = uniform_weight(1, 4, 1);
    auto single = mk_spec(SparseCollection{{std_cube(0, 0)}, 1.0, {}}, 1.0, ex::inf);

    // exact optimum 1 at the single cube (attained by indicators)
    auto est = strong_norm_estimate(single, 2.0, one, 500, 1);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-9));

    // determinism: same seed, same bytes
    auto est2 = strong_norm_estimate(single, 2.0, one, 500, 1);
    CHECK(est.value == est2.value);
    CHECK(est.witness_f.cells() == est2.witness_f.cells());

    // monotone in budget
    auto chain_spec = mk_spec(chain_collection(4), 1.0, ex::inf);
    chain_spec.collection.eta = 0.5;
    Weight w = two_step_weight(4);
    double lo = strong_norm_estimate(chain_spec, 2.0, w, 200, 7).value;
    double hi = strong_norm_estimate(chain_spec, 2.0, w, 2000, 7).value;
    CHECK(lo <= hi * (1 + 1e-12));

    // scale invariance of the estimate under w -> 2w (identical trajectory)
    Weight w2{scale(w.fn, 2.0), w.domain};
    double a = strong_norm_estimate(chain_spec, 2.0, w, 800, 3).value;
    double b = strong_norm_estimate(chain_spec, 2.0, w2, 800, 3).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));

    // never exceeds the unweighted bound of Remark 2.3 at w = 1
    for (auto pq : {std::pair{1.0, ex::inf}, {1.0, 2.0}, {2.0, 4.0}}) {
        auto spec = mk_spec(chain_collection(4), pq.first, pq.second);
        spec.collection.eta = 0.5;
        double p = std::isinf(pq.second) ? 2.0 : 0.5 * (pq.first + pq.second);
        double est3 = strong_norm_estimate(spec, p, one, 600, 11).value;
        CHECK(est3 <= unweighted_form_bound(spec, p) * (1 + 1e-9));
        CHECK(est3 > 0.0);
    }
}

TEST_CASE("weak norm estimate") {
    Weight one = uniform_weight(1, 4, 1);
    auto single = mk_spec(SparseCollection{{std_cube(0, 0)}, 1.0, {}}, 1.0, ex::inf);
    auto est = weak_norm_estimate(single, one, 300, 1);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-9));

    // monotone in budget, deterministic
    auto chain_spec = mk_spec(chain_collection(4), 1.0, ex::inf);
    Weight w = two_step_weight(4);
    double lo = weak_norm_estimate(chain_spec, w, 100, 5).value;
    double hi = weak_norm_estimate(chain_spec, w, 1000, 5).value;
    CHECK(lo <= hi * (1 + 1e-12));
    CHECK(weak_norm_estimate(chain_spec, w, 300, 5).value ==
          weak_norm_estimate(chain_spec, w, 300, 5).value);

    // witness re-evaluation equals the reported value
    auto e2 = weak_norm_estimate(chain_spec, w, 400, 9);
    LatticeFunction af = sparse_operator(chain_spec.collection, 1.0, e2.witness_f);
    CHECK(weak_lp(af, 1.0, w) / lp_norm(e2.witness_f, 1.0, w) == doctest::Approx(e2.value));
}

TEST_CASE("dual weak type check") {
    double c_dual = Calibration::active().c_dual;
    Weight one = uniform_weight(1, 4, 1);
    LatticeFunction f = chi(4, 0, 16);
    auto spec = mk_spec(chain_collection(4), 1.0, 2.0);

    auto r = dual_weak_check(spec, one, f, c_dual);
    CHECK(r.pass);

    Weight w = two_step_weight(4);
    Rng rng(77);
    for (int rep = 0; rep < 30; ++rep) {
        LatticeFunction rf = oracle::random_fn(rng, 4);
        if (rf.cells().empty()) continue;
        auto rr = dual_weak_check(spec, w, rf, c_dual);
        CHECK(rr.pass);
    }

    // pass status invariant under w -> 2w
    Weight w2{scale(w.fn, 2.0), w.domain};
    auto a = dual_weak_check(spec, w, f, c_dual);
    auto b = dual_weak_check(spec, w2, f, c_dual);
    CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-12));
    CHECK(a.rhs == doctest::Approx(b.rhs).epsilon(1e-12));

    CHECK_THROWS(dual_weak_check(mk_spec(chain_collection(4), 1.0, ex::inf), one, f, c_dual));
}

TEST_CASE("collection JSON round trip") {
    SparseCollection s = chain_collection(3);
    SparseCollection back = SparseCollection::from_json(s.to_json());
    CHECK(back.eta == s.eta);
    REQUIRE(back.cubes.size() == s.cubes.size());
    for (size_t i = 0; i < s.cubes.size(); ++i) CHECK(same_cube(back.cubes[i], s.cubes[i]));
    CHECK_THROWS(SparseCollection::from_json("{\"cubes\": []}"));
    CHECK_THROWS(SparseCollection::from_json("{\"eta\": 2.0, \"cubes\": []}"));
}
