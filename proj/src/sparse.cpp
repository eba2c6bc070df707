#include "hx/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hx/exponents.hpp"
#include "hx/maximal.hpp"
#include "hx/report.hpp"
#include "hx/rng.hpp"

namespace hx {

namespace {

std::vector<CellIdx> cells_of_range(const CellRange& r) {
    std::vector<CellIdx> out;
    if (r.empty()) return out;
    CellIdx i = r.lo;
    while (true) {
        out.push_back(i);
        int axis = 0;
        while (axis < r.dim()) {
            if (++i[axis] < r.hi[axis]) break;
            i[axis] = r.lo[axis];
            ++axis;
        }
        if (axis == r.dim()) break;
    }
    return out;
}

bool same_grid(const Cube& a, const Cube& b) { return a.shift.t == b.shift.t; }

bool cube_subset(const Cube& inner, const Cube& outer) {
    if (!same_grid(inner, outer)) return false;
    if (inner.level < outer.level) return false;
    return cube_box(outer).contains_box(cube_box(inner));
}

}  // namespace

SparseVerification verify_sparse(const std::vector<Cube>& cubes, double eta,
                                 const LatticeFunction& lattice) {
    SparseVerification v;
    v.ok = true;
    v.worst_fraction = 1.0;
    for (size_t qi = 0; qi < cubes.size(); ++qi) {
        CellRange rq = lattice.range_of_cube(cubes[qi]);
        std::set<CellIdx> cells;
        for (auto& c : cells_of_range(rq)) cells.insert(c);
        long long total = rq.count();
        for (size_t pi = 0; pi < cubes.size(); ++pi) {
            if (pi == qi || !same_grid(cubes[pi], cubes[qi])) continue;
            if (!cube_subset(cubes[pi], cubes[qi]) || same_cube(cubes[pi], cubes[qi])) continue;
            for (auto& c : cells_of_range(lattice.range_of_cube(cubes[pi]))) cells.erase(c);
        }
        double frac = static_cast<double>(cells.size()) / static_cast<double>(total);
        v.worst_fraction = std::min(v.worst_fraction, frac);
        if (frac + 1e-15 < eta) v.ok = false;
        v.witness[qi] = std::vector<CellIdx>(cells.begin(), cells.end());
    }
    if (!v.ok) v.witness.clear();
    return v;
}

double carleson(const std::vector<Cube>& cubes) {
    if (cubes.empty()) return 0.0;
    for (size_t i = 1; i < cubes.size(); ++i)
        if (!same_grid(cubes[i], cubes[0])) throw std::domain_error("carleson: cubes from several grids");
    double best = 0.0;
    for (const Cube& q : cubes) {
        double packed = 0.0;
        for (const Cube& p : cubes)
            if (cube_subset(p, q)) packed += cube_measure(p).to_double();
        best = std::max(best, packed / cube_measure(q).to_double());
    }
    return best;
}

double sparse_form(const SparseFormSpec& spec, const LatticeFunction& f, const LatticeFunction& g) {
    if (!f.same_lattice(g)) throw std::domain_error("lattice mismatch");
    double p0 = spec.exponents.p0;
    double q0p = ex::conj(spec.exponents.q0);
    double s = 0.0;
    for (const Cube& q : spec.collection.cubes) {
        CellRange r = f.range_of_cube(q);
        s += average_range(f, p0, r) * average_range(g, q0p, r) * cube_measure(q).to_double();
    }
    return spec.scale * s;
}

LatticeFunction sparse_operator(const SparseCollection& s, double p0, const LatticeFunction& f) {
    LatticeFunction out(f.dim(), f.level(), f.denom());
    for (const Cube& q : s.cubes) {
        CellRange r = f.range_of_cube(q);
        double a = average_range(f, p0, r);
        if (a == 0.0) continue;
        for (auto& c : cells_of_range(r)) out.set_cell(c, out.cell(c) + a);
    }
    return out;
}

LatticeFunction sparse_operator_linear(const SparseCollection& s, const LatticeFunction& f) {
    LatticeFunction out(f.dim(), f.level(), f.denom());
    for (const Cube& q : s.cubes) {
        CellRange r = f.range_of_cube(q);
        double sum = 0.0;
        for (const auto& [idx, v] : f.cells())
            if (r.contains(idx)) sum += v;
        double a = sum / static_cast<double>(r.count());
        if (a == 0.0) continue;
        for (auto& c : cells_of_range(r)) out.set_cell(c, out.cell(c) + a);
    }
    return out;
}

namespace {

CellRange hull_of(const SparseFormSpec& spec, const LatticeFunction& f, const LatticeFunction& g) {
    CellRange h;
    bool first = true;
    auto fold = [&](const CellRange& r) {
        if (first) {
            h = r;
            first = false;
            return;
        }
        for (int i = 0; i < h.dim(); ++i) {
            h.lo[i] = std::min(h.lo[i], r.lo[i]);
            h.hi[i] = std::max(h.hi[i], r.hi[i]);
        }
    };
    for (const Cube& q : spec.collection.cubes) fold(f.range_of_cube(q));
    if (auto s = f.support_hull()) fold(*s);
    if (auto s = g.support_hull()) fold(*s);
    return h;
}

GridShift collection_shift(const SparseFormSpec& spec) {
    if (spec.collection.cubes.empty()) throw std::domain_error("sparse: empty collection");
    const GridShift& sh = spec.collection.cubes.front().shift;
    for (const Cube& q : spec.collection.cubes)
        if (q.shift.t != sh.t) throw std::domain_error("sparse: check requires a single grid");
    return sh;
}

}  // namespace

FormCheck intermedmax_check(const SparseFormSpec& spec, const LatticeFunction& f,
                            const LatticeFunction& g, double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::domain_error("intermedmax_check: beta in (0,1]");
    GridShift sh = collection_shift(spec);
    double p0 = spec.exponents.p0;
    double q0p = ex::conj(spec.exponents.q0);

    SparseFormSpec unit = spec;
    unit.scale = 1.0;
    FormCheck c;
    c.lhs = sparse_form(unit, f, g);

    CellRange window = hull_of(spec, f, g);
    MaximalConfig cfg;
    cfg.variant = MaxVariant::DyadicSingleGrid;
    cfg.shift = sh;
    cfg.q = q0p;
    cfg.window = window;
    LatticeFunction mg = maximal(g, cfg);

    LatticeFunction inner(f.dim(), f.level(), f.denom());
    for (const auto& [idx, v] : f.cells())
        inner.set_cell(idx, std::pow(mg.cell(idx), 1.0 - beta) * std::abs(v));
    cfg.q = p0;
    LatticeFunction m_inner = maximal(inner, cfg);

    double integral = 0.0;
    for (const auto& [idx, v] : m_inner.cells()) integral += v * std::pow(mg.cell(idx), beta);
    integral *= f.cell_volume();

    c.rhs = (1.0 / spec.collection.eta) * integral;
    c.ratio = (c.rhs > 0.0) ? c.lhs / c.rhs : 0.0;
    c.pass = c.lhs <= c.rhs * (1.0 + 1e-9);
    return c;
}

FormCheck lemma_main_check(const SparseFormSpec& spec, const LatticeFunction& f,
                           const LatticeFunction& g, const Weight& w, double p, double q,
                           double c_lem) {
    const ExponentPair& ep = spec.exponents;
    if (!(ep.p0 < p && p < ep.q0)) throw std::domain_error("lemma_main_check: p outside (p0,q0)");
    if (!(1.0 < q && std::isfinite(q))) throw std::domain_error("lemma_main_check: need 1 < q < inf");
    GridShift sh = collection_shift(spec);

    SparseFormSpec unit = spec;
    unit.scale = 1.0;
    FormCheck c;
    c.lhs = sparse_form(unit, f, g);

    double r = ex::conj(ex::div(ep.q0, p));
    CellRange window = hull_of(spec, f, g);
    for (int i = 0; i < window.dim(); ++i) {
        window.lo[i] = std::min(window.lo[i], w.domain.lo[i]);
        window.hi[i] = std::max(window.hi[i], w.domain.hi[i]);
    }
    MaximalConfig cfg;
    cfg.variant = MaxVariant::DyadicSingleGrid;
    cfg.shift = sh;
    cfg.q = q * r;
    cfg.window = window;
    LatticeFunction mw = maximal(w.fn, cfg);

    double pp = ex::conj(p);
    double nf = 0.0;
    for (const auto& [idx, v] : f.cells()) nf += std::pow(std::abs(v), p) * mw.cell(idx);
    nf = std::pow(nf * f.cell_volume(), 1.0 / p);

    Weight sigma{power(w.fn, 1.0 - pp), w.domain};
    double ng = lp_norm(g, pp, sigma);

    c.rhs = c_lem * c_p(p, ep) * std::pow(ex::conj(q), 1.0 / pp) * nf * ng;
    c.ratio = (c.rhs > 0.0) ? c.lhs / c.rhs : 0.0;
    c.pass = c.lhs <= c.rhs * (1.0 + 1e-9);
    return c;
}

double unweighted_form_bound(const SparseFormSpec& spec, double p) {
    const ExponentPair& ep = spec.exponents;
    double a = ex::pow(ex::conj(p / ep.p0), 1.0 / ep.p0);
    double b = ex::pow(ex::conj(ex::div(ex::conj(p), ex::conj(ep.q0))), ex::div(1.0, ex::conj(ep.q0)));
    return spec.scale * (1.0 / spec.collection.eta) * a * b;
}

// ---------------------------------------------------------------------------
// Norm estimators: dense working arrays over the weight domain, deterministic
// seeded restarts, cellwise multiplicative probes; for (p0,q0') = (1,1) an
// exact alternating duality step is available and used as the workhorse.

namespace {

struct Evaluator {
    const SparseFormSpec& spec;
    const Weight& w;
    double p, pp, p0, q0p;
    double cellvol;
    std::vector<CellIdx> cells;              // domain cells
    std::map<CellIdx, int> cell_pos;
    std::vector<double> wv, sigmav;          // w and w^{1-p'} per cell
    std::vector<std::vector<int>> cube_cells;
    std::vector<std::vector<int>> cell_cubes;
    std::vector<double> cube_meas;
    std::vector<long long> cube_count;

    std::vector<double> f, g;
    std::vector<double> SQ, TQ;  // per-cube sums of f^{p0}, g^{q0'}
    double nf_acc = 0.0, ng_acc = 0.0;
    long long evals = 0;

    Evaluator(const SparseFormSpec& sp, double p_, const Weight& w_)
        : spec(sp), w(w_), p(p_) {
        pp = ex::conj(p);
        p0 = sp.exponents.p0;
        q0p = ex::conj(sp.exponents.q0);
        cellvol = w.fn.cell_volume();
        cells = cells_of_range(w.domain);
        for (size_t i = 0; i < cells.size(); ++i) cell_pos[cells[i]] = static_cast<int>(i);
        wv.resize(cells.size());
        sigmav.resize(cells.size());
        for (size_t i = 0; i < cells.size(); ++i) {
            wv[i] = w.fn.cell(cells[i]);
            sigmav[i] = std::pow(wv[i], 1.0 - pp);
        }
        cell_cubes.resize(cells.size());
        for (size_t qi = 0; qi < spec.collection.cubes.size(); ++qi) {
            CellRange r = w.fn.range_of_cube(spec.collection.cubes[qi]);
            if (!w.domain.contains_range(r))
                throw std::domain_error("norm estimate: collection leaves the weight domain");
            std::vector<int> ids;
            for (auto& c : cells_of_range(r)) {
                int pos = cell_pos.at(c);
                ids.push_back(pos);
                cell_cubes[pos].push_back(static_cast<int>(qi));
            }
            cube_cells.push_back(std::move(ids));
            cube_meas.push_back(cube_measure(spec.collection.cubes[qi]).to_double());
            cube_count.push_back(r.count());
        }
        f.assign(cells.size(), 0.0);
        g.assign(cells.size(), 0.0);
        SQ.assign(cube_cells.size(), 0.0);
        TQ.assign(cube_cells.size(), 0.0);
    }

    void load(const std::vector<double>& fi, const std::vector<double>& gi) {
        f = fi;
        g = gi;
        rebuild();
    }

    void rebuild() {
        nf_acc = ng_acc = 0.0;
        for (size_t i = 0; i < cells.size(); ++i) {
            nf_acc += std::pow(f[i], p) * wv[i];
            ng_acc += std::pow(g[i], pp) * sigmav[i];
        }
        for (size_t qi = 0; qi < cube_cells.size(); ++qi) {
            double s = 0.0, t = 0.0;
            for (int c : cube_cells[qi]) {
                s += std::pow(f[c], p0);
                t += std::pow(g[c], q0p);
            }
            SQ[qi] = s;
            TQ[qi] = t;
        }
    }

    double form() const {
        double s = 0.0;
        for (size_t qi = 0; qi < cube_cells.size(); ++qi) {
            double cnt = static_cast<double>(cube_count[qi]);
            s += std::pow(SQ[qi] / cnt, 1.0 / p0) * std::pow(TQ[qi] / cnt, 1.0 / q0p) * cube_meas[qi];
        }
        return spec.scale * s;
    }

    double value() {
        ++evals;
        double nf = std::pow(nf_acc * cellvol, 1.0 / p);
        double ng = std::pow(ng_acc * cellvol, 1.0 / pp);
        if (nf <= 0.0 || ng <= 0.0) return 0.0;
        return form() / (nf * ng);
    }

    void set_f(int i, double v) {
        double dv = std::pow(v, p0) - std::pow(f[i], p0);
        for (int qi : cell_cubes[i]) SQ[qi] += dv;
        nf_acc += (std::pow(v, p) - std::pow(f[i], p)) * wv[i];
        f[i] = v;
    }
    void set_g(int i, double v) {
        double dv = std::pow(v, q0p) - std::pow(g[i], q0p);
        for (int qi : cell_cubes[i]) TQ[qi] += dv;
        ng_acc += (std::pow(v, pp) - std::pow(g[i], pp)) * sigmav[i];
        g[i] = v;
    }

    // Exact duality steps for p0 = 1, q0' = 1.
    bool exact_alternate() {
        if (p0 != 1.0 || q0p != 1.0) return false;
        // f* = (phi/w)^{p'-1} with phi = sum_Q <g>_{1,Q} chi_Q
        std::vector<double> phi(cells.size(), 0.0);
        for (size_t qi = 0; qi < cube_cells.size(); ++qi) {
            double gb = TQ[qi] / static_cast<double>(cube_count[qi]);
            for (int c : cube_cells[qi]) phi[c] += gb;
        }
        for (size_t i = 0; i < cells.size(); ++i) set_f(static_cast<int>(i), std::pow(phi[i] / wv[i], pp - 1.0));
        // g* = (psi/sigma)^{p-1} with psi = sum_Q <f>_{1,Q} chi_Q
        std::vector<double> psi(cells.size(), 0.0);
        for (size_t qi = 0; qi < cube_cells.size(); ++qi) {
            double fb = SQ[qi] / static_cast<double>(cube_count[qi]);
            for (int c : cube_cells[qi]) psi[c] += fb;
        }
        for (size_t i = 0; i < cells.size(); ++i) set_g(static_cast<int>(i), std::pow(psi[i] / sigmav[i], p - 1.0));
        return true;
    }
};

void normalize_positive(std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    if (m <= 0.0) {
        std::fill(v.begin(), v.end(), 1.0);
        return;
    }
    for (double& x : v) x /= m;
}

}  // namespace

NormEstimate strong_norm_estimate(const SparseFormSpec& spec, double p, const Weight& w,
                                  long long budget, std::uint64_t seed) {
    const ExponentPair& ep = spec.exponents;
    if (!(ep.p0 < p && p < ep.q0)) throw std::domain_error("strong_norm_estimate: p outside (p0,q0)");
    Evaluator ev(spec, p, w);
    const size_t N = ev.cells.size();
    Rng rng(seed);

    std::vector<double> best_f, best_g;
    double best = 0.0;
    auto consider = [&](double v) {
        if (v > best) {
            best = v;
            best_f = ev.f;
            best_g = ev.g;
        }
    };

    // Structured starts: constants, cube indicators, weight powers, then
    // seeded random restarts.  Each start gets exact alternating steps when
    // available, then cellwise multiplicative probes.
    std::vector<std::pair<std::vector<double>, std::vector<double>>> starts;
    starts.push_back({std::vector<double>(N, 1.0), std::vector<double>(N, 1.0)});
    size_t cube_cap = std::min<size_t>(spec.collection.cubes.size(), 8);
    for (size_t qi = 0; qi < cube_cap; ++qi) {
        std::vector<double> fi(N, 0.0), gi(N, 0.0);
        for (int c : ev.cube_cells[qi]) fi[c] = gi[c] = 1.0;
        starts.push_back({fi, gi});
    }
    for (double a : {0.25, 0.5, 0.9}) {
        std::vector<double> fi(N), gi(N);
        for (size_t i = 0; i < N; ++i) {
            fi[i] = std::pow(ev.wv[i], -a);
            gi[i] = std::pow(ev.wv[i], a);
        }
        normalize_positive(fi);
        normalize_positive(gi);
        starts.push_back({fi, gi});
    }
    for (int rep = 0; rep < 4; ++rep) {
        Rng r = rng.child(rep + 1);
        std::vector<double> fi(N), gi(N);
        for (size_t i = 0; i < N; ++i) {
            fi[i] = std::exp(r.uniform(-2.0, 2.0));
            gi[i] = std::exp(r.uniform(-2.0, 2.0));
        }
        starts.push_back({fi, gi});
    }

    static const double kMults[] = {0.0, 0.25, 0.5, 0.8, 1.25, 2.0, 4.0};
    for (auto& st : starts) {
        if (ev.evals >= budget) break;
        ev.load(st.first, st.second);
        consider(ev.value());
        for (int round = 0; round < 8 && ev.evals < budget; ++round) {
            if (!ev.exact_alternate()) break;
            double v = ev.value();
            consider(v);
        }
        bool improved = true;
        while (improved && ev.evals < budget) {
            improved = false;
            double cur = ev.value();
            consider(cur);
            for (size_t i = 0; i < N && ev.evals < budget; ++i) {
                double base = ev.f[i];
                double ref = (base > 0.0) ? base : 1.0;
                double keep = base, keep_val = cur;
                for (double m : kMults) {
                    double cand = (base > 0.0) ? base * m : ref * m;
                    if (cand == base) continue;
                    ev.set_f(static_cast<int>(i), cand);
                    double v = ev.value();
                    if (v > keep_val * (1.0 + 1e-12)) {
                        keep_val = v;
                        keep = cand;
                    }
                }
                ev.set_f(static_cast<int>(i), keep);
                if (keep != base) {
                    improved = true;
                    cur = keep_val;
                }
            }
            for (size_t i = 0; i < N && ev.evals < budget; ++i) {
                double base = ev.g[i];
                double ref = (base > 0.0) ? base : 1.0;
                double keep = base, keep_val = cur;
                for (double m : kMults) {
                    double cand = (base > 0.0) ? base * m : ref * m;
                    if (cand == base) continue;
                    ev.set_g(static_cast<int>(i), cand);
                    double v = ev.value();
                    if (v > keep_val * (1.0 + 1e-12)) {
                        keep_val = v;
                        keep = cand;
                    }
                }
                ev.set_g(static_cast<int>(i), keep);
                if (keep != base) {
                    improved = true;
                    cur = keep_val;
                }
            }
            consider(cur);
        }
    }

    NormEstimate est;
    est.evaluations = ev.evals;
    est.witness_f = LatticeFunction(w.fn.dim(), w.fn.level(), w.fn.denom());
    est.witness_g = LatticeFunction(w.fn.dim(), w.fn.level(), w.fn.denom());
    if (!best_f.empty()) {
        for (size_t i = 0; i < N; ++i) {
            if (best_f[i] != 0.0) est.witness_f.set_cell(ev.cells[i], best_f[i]);
            if (best_g[i] != 0.0) est.witness_g.set_cell(ev.cells[i], best_g[i]);
        }
        // Certified value: direct evaluation of the witness.
        Weight sigma{power(w.fn, 1.0 - ex::conj(p)), w.domain};
        double nf = lp_norm(est.witness_f, p, w);
        double ng = lp_norm(est.witness_g, ex::conj(p), sigma);
        est.value = sparse_form(spec, est.witness_f, est.witness_g) / (nf * ng);
    }
    return est;
}

NormEstimate weak_norm_estimate(const SparseFormSpec& spec, const Weight& w,
                                long long budget, std::uint64_t seed) {
    const double p0 = spec.exponents.p0;
    const LatticeFunction& proto = w.fn;
    std::vector<CellIdx> cells = cells_of_range(w.domain);
    const size_t N = cells.size();
    Rng rng(seed);
    long long evals = 0;

    auto objective = [&](const std::vector<double>& fv) -> double {
        ++evals;
        LatticeFunction f(proto.dim(), proto.level(), proto.denom());
        for (size_t i = 0; i < N; ++i)
            if (fv[i] != 0.0) f.set_cell(cells[i], fv[i]);
        double nf = lp_norm(f, p0, w);
        if (nf <= 0.0) return 0.0;
        LatticeFunction af = scale(sparse_operator(spec.collection, p0, f), spec.scale);
        return weak_lp(af, p0, w) / nf;
    };

    std::vector<std::vector<double>> starts;
    starts.push_back(std::vector<double>(N, 1.0));
    size_t cube_cap = std::min<size_t>(spec.collection.cubes.size(), 6);
    for (size_t qi = 0; qi < cube_cap; ++qi) {
        std::vector<double> fi(N, 0.0);
        CellRange r = proto.range_of_cube(spec.collection.cubes[qi]);
        for (size_t i = 0; i < N; ++i)
            if (r.contains(cells[i])) fi[i] = 1.0;
        starts.push_back(fi);
    }
    for (double a : {0.5, 1.0}) {
        std::vector<double> fi(N);
        for (size_t i = 0; i < N; ++i) fi[i] = std::pow(w.fn.cell(cells[i]), -a);
        normalize_positive(fi);
        starts.push_back(fi);
    }
    for (int rep = 0; rep < 3; ++rep) {
        Rng r = rng.child(100 + rep);
        std::vector<double> fi(N);
        for (size_t i = 0; i < N; ++i) fi[i] = std::exp(r.uniform(-2.0, 2.0));
        starts.push_back(fi);
    }

    double best = 0.0;
    std::vector<double> best_f;
    static const double kMults[] = {0.0, 0.25, 0.5, 2.0, 4.0};
    for (auto& st : starts) {
        if (evals >= budget) break;
        std::vector<double> cur = st;
        double cur_val = objective(cur);
        if (cur_val > best) {
            best = cur_val;
            best_f = cur;
        }
        bool improved = true;
        while (improved && evals < budget) {
            improved = false;
            for (size_t i = 0; i < N && evals < budget; ++i) {
                double base = cur[i];
                double ref = (base > 0.0) ? base : 1.0;
                for (double m : kMults) {
                    double cand = (base > 0.0) ? base * m : ref * m;
                    if (cand == cur[i]) continue;
                    double old = cur[i];
                    cur[i] = cand;
                    double v = objective(cur);
                    if (v > cur_val * (1.0 + 1e-12)) {
                        cur_val = v;
                        improved = true;
                    } else {
                        cur[i] = old;
                    }
                }
            }
            if (cur_val > best) {
                best = cur_val;
                best_f = cur;
            }
        }
    }

    NormEstimate est;
    est.evaluations = evals;
    est.witness_f = LatticeFunction(proto.dim(), proto.level(), proto.denom());
    est.witness_g = LatticeFunction(proto.dim(), proto.level(), proto.denom());
    if (!best_f.empty()) {
        for (size_t i = 0; i < N; ++i)
            if (best_f[i] != 0.0) est.witness_f.set_cell(cells[i], best_f[i]);
        LatticeFunction af = scale(sparse_operator(spec.collection, p0, est.witness_f), spec.scale);
        est.value = weak_lp(af, p0, w) / lp_norm(est.witness_f, p0, w);
    }
    return est;
}

FormCheck dual_weak_check(const SparseFormSpec& spec, const Weight& w, const LatticeFunction& f,
                          double c_dual) {
    const ExponentPair& ep = spec.exponents;
    if (std::isinf(ep.q0)) throw std::domain_error("dual_weak_check: requires q0 < inf");
    if (ep.p0 != 1.0) throw std::domain_error("dual_weak_check: linear realization requires p0 = 1");
    double q0p = ex::conj(ep.q0);

    LatticeFunction tstar = scale(sparse_operator_linear(spec.collection, f), spec.scale);
    LatticeFunction ratio(f.dim(), f.level(), f.denom());
    for (const auto& [idx, v] : tstar.cells()) {
        if (!w.domain.contains(idx)) throw std::domain_error("dual_weak_check: leaves the weight domain");
        ratio.set_cell(idx, v / std::pow(w.fn.cell(idx), 1.0 / q0p));
    }
    FormCheck c;
    c.lhs = weak_lp(ratio, q0p, w);

    auto fam = dyadic_family(w);
    double ainf = a_infty_wilson(w, fam).value;
    double a1 = a_p(w, 1.0, fam).value;
    c.rhs = c_dual * std::pow(ainf * std::log(std::exp(1.0) + a1), 1.0 / q0p) * lp_norm_lebesgue(f, q0p);
    c.ratio = (c.rhs > 0.0) ? c.lhs / c.rhs : 0.0;
    c.pass = c.lhs <= c.rhs * (1.0 + 1e-9);
    return c;
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

std::string SparseCollection::to_json() const {
    json j;
    j["eta"] = eta;
    json arr = json::array();
    for (const Cube& q : cubes) {
        json c;
        c["shift"] = q.shift.t;
        c["level"] = q.level;
        c["index"] = q.m;
        arr.push_back(c);
    }
    j["cubes"] = arr;
    return j.dump(2);
}

SparseCollection SparseCollection::from_json(const std::string& text) {
    json j = json::parse(text);
    SparseCollection s;
    if (!j.contains("eta")) throw std::invalid_argument("sparse JSON: missing field \"eta\"");
    if (!j.contains("cubes")) throw std::invalid_argument("sparse JSON: missing field \"cubes\"");
    s.eta = j["eta"].get<double>();
    if (!(s.eta > 0.0 && s.eta <= 1.0)) throw std::invalid_argument("sparse JSON: eta outside (0,1]");
    for (const auto& c : j["cubes"]) {
        if (!c.contains("shift") || !c.contains("level") || !c.contains("index"))
            throw std::invalid_argument("sparse JSON: cube missing \"shift\", \"level\" or \"index\"");
        Cube q;
        std::vector<int> t = c["shift"].get<std::vector<int>>();
        q.shift = GridShift(static_cast<int>(t.size()), t);
        q.level = c["level"].get<int>();
        q.m = c["index"].get<std::vector<long long>>();
        if (q.m.size() != t.size()) throw std::invalid_argument("sparse JSON: cube index of wrong dimension");
        s.cubes.push_back(q);
    }
    return s;
}

std::string NormEstimate::to_json() const {
    std::ostringstream os;
    os << "{\n  \"value\": " << format_double(value) << ",\n  \"evaluations\": " << evaluations
       << ",\n  \"witness_f\": " << witness_f.to_json() << ",\n  \"witness_g\": " << witness_g.to_json()
       << "\n}\n";
    return os.str();
}

}  // namespace hx
