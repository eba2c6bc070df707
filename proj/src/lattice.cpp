#include "hx/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace hx {

static const double kInf = std::numeric_limits<double>::infinity();

LatticeFunction::LatticeFunction(int dim, int level, int denom)
    : dim_(dim), level_(level), denom_(denom) {
    if (dim < 1) throw std::domain_error("LatticeFunction: dim must be >= 1");
    if (level < 0 || level > 40) throw std::domain_error("LatticeFunction: level out of range");
    if (denom != 1 && denom != 3) throw std::domain_error("LatticeFunction: denominator must be 1 or 3");
}

void LatticeFunction::set_cell(const CellIdx& i, double v) {
    if (static_cast<int>(i.size()) != dim_) throw std::domain_error("LatticeFunction: index dimension mismatch");
    if (v == 0.0)
        cells_.erase(i);
    else
        cells_[i] = v;
}

double LatticeFunction::cell(const CellIdx& i) const {
    auto it = cells_.find(i);
    return it == cells_.end() ? 0.0 : it->second;
}

double LatticeFunction::cell_volume() const {
    double side = 1.0 / (static_cast<double>(denom_) * std::ldexp(1.0, level_));
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) v *= side;
    return v;
}

CellRange LatticeFunction::range_of_box(const RatBox& box) const {
    if (box.dim() != dim_) throw std::domain_error("lattice mismatch");
    Rat side = cell_side();
    CellRange r;
    r.lo.resize(dim_);
    r.hi.resize(dim_);
    for (int i = 0; i < dim_; ++i) {
        Rat a = box.lo[i] / side;
        Rat b = box.hi[i] / side;
        if (a.den != 1 || b.den != 1) throw std::domain_error("lattice mismatch");
        r.lo[i] = static_cast<long long>(a.num);
        r.hi[i] = static_cast<long long>(b.num);
    }
    return r;
}

CellRange LatticeFunction::range_of_cube(const Cube& q) const { return range_of_box(cube_box(q)); }

RatBox LatticeFunction::box_of_range(const CellRange& r) const {
    RatBox box;
    for (int i = 0; i < dim_; ++i) {
        box.lo.push_back(Rat::cell_coord(r.lo[i], denom_, level_));
        box.hi.push_back(Rat::cell_coord(r.hi[i], denom_, level_));
    }
    return box;
}

std::optional<CellRange> LatticeFunction::support_hull() const {
    if (cells_.empty()) return std::nullopt;
    CellRange r;
    r.lo.assign(dim_, std::numeric_limits<long long>::max());
    r.hi.assign(dim_, std::numeric_limits<long long>::min());
    for (const auto& [idx, v] : cells_) {
        for (int i = 0; i < dim_; ++i) {
            r.lo[i] = std::min(r.lo[i], idx[i]);
            r.hi[i] = std::max(r.hi[i], idx[i] + 1);
        }
    }
    return r;
}

LatticeFunction LatticeFunction::refined() const {
    LatticeFunction g(dim_, level_ + 1, denom_);
    for (const auto& [idx, v] : cells_) {
        long long count = 1LL << dim_;
        for (long long bits = 0; bits < count; ++bits) {
            CellIdx j(dim_);
            for (int i = 0; i < dim_; ++i) j[i] = 2 * idx[i] + ((bits >> i) & 1);
            g.set_cell(j, v);
        }
    }
    return g;
}

static void iterate_range(const CellRange& r, const std::function<void(const CellIdx&)>& fn) {
    if (r.empty()) return;
    CellIdx i = r.lo;
    while (true) {
        fn(i);
        int axis = 0;
        while (axis < r.dim()) {
            if (++i[axis] < r.hi[axis]) break;
            i[axis] = r.lo[axis];
            ++axis;
        }
        if (axis == r.dim()) break;
    }
}

double average_range(const LatticeFunction& f, double p, const CellRange& r) {
    if (!(p > 0)) throw std::domain_error("average: p must be positive");
    long long total = r.count();
    if (total <= 0) throw std::domain_error("average: empty region");
    if (p == kInf) {
        double best = 0.0;
        long long mapped = 0;
        for (const auto& [idx, v] : f.cells()) {
            if (!r.contains(idx)) continue;
            ++mapped;
            best = std::max(best, std::abs(v));
        }
        if (mapped < total) best = std::max(best, 0.0);
        return best;
    }
    // Averages are sums of |f|^p over cells divided by the cell count, so the
    // base-cell volume (inexact for d = 3) never enters.
    double s = 0.0;
    for (const auto& [idx, v] : f.cells()) {
        if (!r.contains(idx)) continue;
        s += std::pow(std::abs(v), p);
    }
    return std::pow(s / static_cast<double>(total), 1.0 / p);
}

double average(const LatticeFunction& f, double p, const Cube& q) {
    return average_range(f, p, f.range_of_cube(q));
}

double essinf_range(const LatticeFunction& f, const CellRange& r) {
    long long total = r.count();
    long long mapped = 0;
    double best = kInf;
    for (const auto& [idx, v] : f.cells()) {
        if (!r.contains(idx)) continue;
        ++mapped;
        best = std::min(best, v);
    }
    if (mapped < total) best = std::min(best, 0.0);
    return best;
}

double pairing(const LatticeFunction& f, const LatticeFunction& g) {
    if (!f.same_lattice(g)) throw std::domain_error("lattice mismatch");
    double s = 0.0;
    const auto& a = f.cells();
    const auto& b = g.cells();
    if (a.size() <= b.size()) {
        for (const auto& [idx, v] : a) {
            auto it = b.find(idx);
            if (it != b.end()) s += v * it->second;
        }
    } else {
        for (const auto& [idx, v] : b) {
            auto it = a.find(idx);
            if (it != a.end()) s += v * it->second;
        }
    }
    return s * f.cell_volume();
}

double lp_norm(const LatticeFunction& f, double p, const Weight& w) {
    if (!(p > 0) || p == kInf) throw std::domain_error("lp_norm: p must be in (0,inf)");
    if (!f.same_lattice(w.fn)) throw std::domain_error("lattice mismatch");
    double s = 0.0;
    for (const auto& [idx, v] : f.cells()) {
        if (!w.domain.contains(idx)) throw std::domain_error("lp_norm: function leaves the weight domain");
        s += std::pow(std::abs(v), p) * w.fn.cell(idx);
    }
    return std::pow(s * f.cell_volume(), 1.0 / p);
}

double lp_norm_lebesgue(const LatticeFunction& f, double p) {
    if (!(p > 0)) throw std::domain_error("lp_norm: p must be positive");
    if (p == kInf) {
        double best = 0.0;
        for (const auto& [idx, v] : f.cells()) best = std::max(best, std::abs(v));
        return best;
    }
    double s = 0.0;
    for (const auto& [idx, v] : f.cells()) s += std::pow(std::abs(v), p);
    return std::pow(s * f.cell_volume(), 1.0 / p);
}

double weak_lp(const LatticeFunction& f, double p, const Weight& w) {
    if (!(p > 0) || p == kInf) throw std::domain_error("weak_lp: p must be in (0,inf)");
    if (!f.same_lattice(w.fn)) throw std::domain_error("lattice mismatch");
    // Collect (|f|, w-mass) pairs, sort by value descending; the suprema over
    // t of t w(|f| > t)^{1/p} is attained at t just below a distinct value.
    std::vector<std::pair<double, double>> vals;
    for (const auto& [idx, v] : f.cells()) {
        if (v == 0.0) continue;
        if (!w.domain.contains(idx)) throw std::domain_error("weak_lp: function leaves the weight domain");
        vals.emplace_back(std::abs(v), w.fn.cell(idx));
    }
    std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    double cv = f.cell_volume();
    double mass = 0.0, best = 0.0;
    size_t i = 0;
    while (i < vals.size()) {
        double v = vals[i].first;
        while (i < vals.size() && vals[i].first == v) {
            mass += vals[i].second * cv;
            ++i;
        }
        best = std::max(best, v * std::pow(mass, 1.0 / p));
    }
    return best;
}

double weak_lp_lebesgue(const LatticeFunction& f, double p) {
    std::vector<std::pair<double, double>> vals;
    for (const auto& [idx, v] : f.cells())
        if (v != 0.0) vals.emplace_back(std::abs(v), 1.0);
    std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    double cv = f.cell_volume();
    double mass = 0.0, best = 0.0;
    size_t i = 0;
    while (i < vals.size()) {
        double v = vals[i].first;
        while (i < vals.size() && vals[i].first == v) {
            mass += cv;
            ++i;
        }
        best = std::max(best, v * std::pow(mass, 1.0 / p));
    }
    return best;
}

double weight_mass(const Weight& w, const CellRange& r) {
    double s = 0.0;
    for (const auto& [idx, v] : w.fn.cells())
        if (r.contains(idx)) s += v;
    return s * w.fn.cell_volume();
}

double weight_mass_cells(const Weight& w, const std::vector<CellIdx>& cells) {
    double s = 0.0;
    for (const auto& i : cells) s += w.fn.cell(i);
    return s * w.fn.cell_volume();
}

double conjugate(double p) {
    if (p < 1.0) throw std::domain_error("conjugate: p must be >= 1");
    if (p == 1.0) return kInf;
    if (p == kInf) return 1.0;
    return p / (p - 1.0);
}

LatticeFunction power(const LatticeFunction& f, double a) {
    LatticeFunction g(f.dim(), f.level(), f.denom());
    bool integral = (a == std::floor(a));
    for (const auto& [idx, v] : f.cells()) {
        if (v < 0 && !integral) throw std::domain_error("power: negative base with fractional exponent");
        g.set_cell(idx, std::pow(v, a));
    }
    return g;
}

LatticeFunction scale(const LatticeFunction& f, double c) {
    LatticeFunction g(f.dim(), f.level(), f.denom());
    for (const auto& [idx, v] : f.cells()) g.set_cell(idx, c * v);
    return g;
}

LatticeFunction add(const LatticeFunction& f, const LatticeFunction& g) {
    if (!f.same_lattice(g)) throw std::domain_error("lattice mismatch");
    LatticeFunction h = f;
    for (const auto& [idx, v] : g.cells()) h.set_cell(idx, h.cell(idx) + v);
    return h;
}

LatticeFunction multiply(const LatticeFunction& f, const LatticeFunction& g) {
    if (!f.same_lattice(g)) throw std::domain_error("lattice mismatch");
    LatticeFunction h(f.dim(), f.level(), f.denom());
    const auto& a = f.cells();
    const auto& b = g.cells();
    for (const auto& [idx, v] : a) {
        auto it = b.find(idx);
        if (it != b.end()) h.set_cell(idx, v * it->second);
    }
    return h;
}

LatticeFunction restrict_to(const LatticeFunction& f, const CellRange& r) {
    LatticeFunction h(f.dim(), f.level(), f.denom());
    for (const auto& [idx, v] : f.cells())
        if (r.contains(idx)) h.set_cell(idx, v);
    return h;
}

LatticeFunction indicator(int dim, int level, int denom, const CellRange& r) {
    LatticeFunction h(dim, level, denom);
    iterate_range(r, [&](const CellIdx& i) { h.set_cell(i, 1.0); });
    return h;
}

Weight power_weight(const Weight& w, double a) {
    Weight v;
    v.fn = power(w.fn, a);
    v.domain = w.domain;
    v.validate();
    return v;
}

void Weight::validate() const {
    long long total = domain.count();
    long long mapped = 0;
    for (const auto& [idx, v] : fn.cells()) {
        if (!domain.contains(idx)) throw std::domain_error("weight: cell outside the declared domain");
        if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error("weight: nonpositive or non-finite cell value");
        ++mapped;
    }
    if (mapped != total) throw std::domain_error("weight: not total on the declared domain");
}

// ---------------------------------------------------------------------------
// JSON serialization
// { "dim": n, "level": K, "denominator": d, "domain": [[lo,hi],...] (weights),
//   "cells": [ { "idx": [...], "value": v }, ... ] }

using nlohmann::json;

static json fn_to_json_obj(const LatticeFunction& f) {
    json j;
    j["dim"] = f.dim();
    j["level"] = f.level();
    j["denominator"] = f.denom();
    json cells = json::array();
    for (const auto& [idx, v] : f.cells()) {
        json c;
        c["idx"] = idx;
        c["value"] = v;
        cells.push_back(c);
    }
    j["cells"] = cells;
    return j;
}

static LatticeFunction fn_from_json_obj(const json& j) {
    if (!j.contains("dim")) throw std::invalid_argument("function JSON: missing field \"dim\"");
    if (!j.contains("level")) throw std::invalid_argument("function JSON: missing field \"level\"");
    if (!j.contains("denominator")) throw std::invalid_argument("function JSON: missing field \"denominator\"");
    if (!j.contains("cells")) throw std::invalid_argument("function JSON: missing field \"cells\"");
    LatticeFunction f(j["dim"].get<int>(), j["level"].get<int>(), j["denominator"].get<int>());
    std::set<CellIdx> seen;
    for (const auto& c : j["cells"]) {
        if (!c.contains("idx") || !c.contains("value"))
            throw std::invalid_argument("function JSON: cell missing \"idx\" or \"value\"");
        CellIdx idx = c["idx"].get<CellIdx>();
        if (static_cast<int>(idx.size()) != f.dim())
            throw std::invalid_argument("function JSON: cell index of wrong dimension");
        if (!seen.insert(idx).second) throw std::invalid_argument("function JSON: duplicate cell index");
        f.set_cell(idx, c["value"].get<double>());
    }
    return f;
}

std::string LatticeFunction::to_json() const { return fn_to_json_obj(*this).dump(2); }

LatticeFunction LatticeFunction::from_json(const std::string& text) {
    return fn_from_json_obj(json::parse(text));
}

std::string Weight::to_json() const {
    json j = fn_to_json_obj(fn);
    json dom = json::array();
    RatBox box = fn.box_of_range(domain);
    for (int i = 0; i < fn.dim(); ++i) dom.push_back({box.lo[i].to_double(), box.hi[i].to_double()});
    j["domain"] = dom;
    return j.dump(2);
}

Weight Weight::from_json(const std::string& text) {
    json j = json::parse(text);
    Weight w;
    w.fn = fn_from_json_obj(j);
    if (!j.contains("domain")) throw std::invalid_argument("weight JSON: missing field \"domain\"");
    RatBox box;
    for (const auto& pairj : j["domain"]) {
        if (pairj.size() != 2) throw std::invalid_argument("weight JSON: malformed \"domain\"");
        box.lo.push_back(Rat::from_double(pairj[0].get<double>()));
        box.hi.push_back(Rat::from_double(pairj[1].get<double>()));
    }
    w.domain = w.fn.range_of_box(box);
    for (const auto& [idx, v] : w.fn.cells())
        if (!(v > 0.0)) throw std::invalid_argument("weight JSON: nonpositive cell value");
    w.validate();
    return w;
}

}  // namespace hx
