#include "hx/weight_constants.hpp"

#include <cmath>
#include <stdexcept>

#include "hx/exponents.hpp"
#include "hx/maximal.hpp"
#include "hx/report.hpp"

namespace hx {

ExponentPair::ExponentPair(double p0_, double q0_) : p0(p0_), q0(q0_) {
    if (!(p0 >= 1.0)) throw std::domain_error("ExponentPair: p0 must be >= 1");
    if (!(q0 > p0)) throw std::domain_error("ExponentPair: need p0 < q0");
}

std::vector<Cube> dyadic_family(const Weight& w) {
    std::vector<Cube> out;
    RatBox dom = w.fn.box_of_range(w.domain);
    GridShift sh = GridShift::standard(w.fn.dim());
    // Coarsest candidate level: a cube no larger than the domain extent.
    double extent = 0.0;
    for (int i = 0; i < dom.dim(); ++i) extent = std::max(extent, (dom.hi[i] - dom.lo[i]).to_double());
    int k_lo = static_cast<int>(std::floor(-std::log2(extent))) - 1;
    for (const Cube& q : cubes_intersecting(dom, sh, k_lo, w.fn.level())) {
        if (dom.contains_box(cube_box(q))) out.push_back(q);
    }
    return out;
}

ConstantEntry a_p(const Weight& w, double p, const std::vector<Cube>& family) {
    if (family.empty()) throw std::domain_error("a_p: empty cube family");
    if (!(p >= 1.0)) throw std::domain_error("a_p: p must be >= 1");
    ConstantEntry best{"A_p", 0.0, family.front()};
    LatticeFunction inv = (p > 1.0) ? power(w.fn, -1.0) : LatticeFunction();
    for (const Cube& q : family) {
        CellRange r = w.fn.range_of_cube(q);
        double avg_w = average_range(w.fn, 1.0, r);
        double val;
        if (p == 1.0) {
            val = avg_w / essinf_range(w.fn, r);
        } else {
            val = avg_w * average_range(inv, ex::conj(p) - 1.0, r);
        }
        if (val > best.value) {
            best.value = val;
            best.attaining = q;
        }
    }
    return best;
}

ConstantEntry a_infty_wilson(const Weight& w, const std::vector<Cube>& family) {
    if (family.empty()) throw std::domain_error("a_infty_wilson: empty cube family");
    ConstantEntry best{"A_infty_wilson", 0.0, family.front()};
    for (const Cube& q : family) {
        CellRange r = w.fn.range_of_cube(q);
        LatticeFunction m = maximal_within(w.fn, q, 1.0);
        double num = 0.0, den = 0.0;
        for (const auto& [idx, v] : m.cells()) num += v;
        for (const auto& [idx, v] : w.fn.cells())
            if (r.contains(idx)) den += v;
        double val = num / den;
        if (val > best.value) {
            best.value = val;
            best.attaining = q;
        }
    }
    return best;
}

ConstantEntry rh(const Weight& w, double s, const std::vector<Cube>& family) {
    if (family.empty()) throw std::domain_error("rh: empty cube family");
    if (!(s >= 1.0)) throw std::domain_error("rh: s must be >= 1");
    if (s == 1.0) return ConstantEntry{"RH_s", 1.0, family.front()};
    ConstantEntry best{"RH_s", 0.0, family.front()};
    for (const Cube& q : family) {
        CellRange r = w.fn.range_of_cube(q);
        double val = average_range(w.fn, s, r) / average_range(w.fn, 1.0, r);
        if (val > best.value) {
            best.value = val;
            best.attaining = q;
        }
    }
    return best;
}

double phi(double s, const ExponentPair& ep) {
    if (!(ep.p0 < s && s < ep.q0)) throw std::domain_error("phi: s outside (p0,q0)");
    return ex::conj(ex::div(ep.q0, s)) * (s / ep.p0 - 1.0) + 1.0;
}

double c_p(double p, const ExponentPair& ep) {
    if (!(ep.p0 < p && p < ep.q0)) throw std::domain_error("c_p: p outside (p0,q0)");
    double pp = ex::conj(p);
    double q0p = ex::conj(ep.q0);
    double p0p = ex::conj(ep.p0);
    double first = ex::pow(ex::conj(ex::div(pp, q0p)), ex::div(1.0, q0p));
    double second = ex::pow(ex::conj(ex::div(p0p, pp)) * ex::conj(p / ep.p0), 1.0 / ep.p0);
    return first * second;
}

double tau_p(double p, double p0) {
    if (!(p > p0 && p0 >= 1.0)) throw std::domain_error("tau_p: need p > p0 >= 1");
    double pp = ex::conj(p);
    double p0p = ex::conj(p0);
    return ex::pow(ex::conj(ex::div(p0p, pp)) * ex::conj(p / p0), 1.0 / p0);
}

static double checked_pow_weight_const(double v) {
    if (!std::isfinite(v)) throw std::domain_error("psi: powered weight leaves the representable range");
    return v;
}

double psi(const Weight& w, const ExponentPair& ep) {
    auto fam = dyadic_family(w);
    const double e = std::exp(1.0);
    if (ep.p0 == 1.0 && std::isinf(ep.q0)) {
        double a1 = a_p(w, 1.0, fam).value;
        double ai = a_infty_wilson(w, fam).value;
        return a1 * std::log(e + ai);
    }
    if (ep.p0 > 1.0 && std::isinf(ep.q0)) {
        double a1 = a_p(w, 1.0, fam).value;
        double ai = a_infty_wilson(w, fam).value;
        return std::pow(a1, 1.0 / ep.p0) * std::pow(ai, 1.0 / ex::conj(ep.p0)) *
               std::pow(std::log(e + ai), 2.0 / ep.p0);
    }
    if (ep.p0 == 1.0) {
        double q0p = ex::conj(ep.q0);
        Weight v = power_weight(w, q0p);
        auto famv = dyadic_family(v);
        double aiv = checked_pow_weight_const(a_infty_wilson(v, famv).value);
        return aiv * a_p(w, 1.0, fam).value * rh(w, q0p, fam).value;
    }
    double r = ex::conj(ep.q0 / ep.p0);
    Weight v = power_weight(w, r);
    auto famv = dyadic_family(v);
    double aiv = checked_pow_weight_const(a_infty_wilson(v, famv).value);
    return std::pow(aiv, 1.0 + 1.0 / ep.p0) *
           std::pow(a_p(w, 1.0, fam).value * rh(w, r, fam).value, 1.0 / ep.p0);
}

double thm11_rhs(const Weight& w, double p, const ExponentPair& ep) {
    if (!(ep.p0 < p && p < ep.q0)) throw std::domain_error("thm11_rhs: p outside (p0,q0)");
    double r = ex::conj(ex::div(ep.q0, p));
    Weight v = (r == 1.0) ? w : power_weight(w, r);
    auto fam = dyadic_family(v);
    double ai = checked_pow_weight_const(a_infty_wilson(v, fam).value);
    double a1 = checked_pow_weight_const(a_p(v, 1.0, fam).value);
    return c_p(p, ep) * std::pow(ai, 1.0 / ex::conj(p)) * std::pow(a1, 1.0 / (p * r));
}

double atwo_rhs(const Weight& w, double p, const ExponentPair& ep) {
    if (!(ep.p0 < p && p < ep.q0)) throw std::domain_error("atwo_rhs: p outside (p0,q0)");
    double r = ex::conj(ex::div(ep.q0, p));
    Weight v = (r == 1.0) ? w : power_weight(w, r);
    auto fam = dyadic_family(v);
    double apf = checked_pow_weight_const(a_p(v, phi(p, ep), fam).value);
    double tail = std::isinf(ep.q0) ? 1.0 : (ep.q0 - 1.0) / (ep.q0 - p);
    double expo = std::max(1.0 / (p - ep.p0), tail) / r;
    return std::pow(apf, expo);
}

InequalityCheck prop22_ii_check(const Weight& w, double p, double s) {
    if (!(p >= 1.0 && s >= 1.0)) throw std::domain_error("prop22_ii_check: need p,s >= 1");
    Weight ws = power_weight(w, s);
    auto fam = dyadic_family(w);
    auto fams = dyadic_family(ws);
    InequalityCheck c;
    c.lhs = checked_pow_weight_const(a_p(ws, s * (p - 1.0) + 1.0, fams).value);
    c.rhs = std::pow(a_p(w, p, fam).value * rh(w, s, fam).value, s);
    c.pass = c.lhs <= c.rhs * (1.0 + 1e-9);
    return c;
}

double weighted_avg(const LatticeFunction& f, double q, const Weight& w, const CellRange& r) {
    if (q == ex::inf) {
        double best = 0.0;
        long long mapped = 0;
        for (const auto& [idx, v] : f.cells()) {
            if (!r.contains(idx)) continue;
            ++mapped;
            best = std::max(best, std::abs(v));
        }
        if (mapped < r.count()) best = std::max(best, 0.0);
        return best;
    }
    double num = 0.0, den = 0.0;
    for (const auto& [idx, v] : w.fn.cells()) {
        if (!r.contains(idx)) continue;
        den += v;
        num += std::pow(std::abs(f.cell(idx)), q) * v;
    }
    return std::pow(num / den, 1.0 / q);
}

HolweightResult holweight_check(const LatticeFunction& f, const LatticeFunction& g,
                                const Weight& w, double p, double q, const Cube& Q) {
    if (!(1.0 <= p && p <= q && std::isfinite(q))) throw std::domain_error("holweight_check: need 1 <= p <= q < inf");
    if (!f.same_lattice(w.fn) || !g.same_lattice(w.fn)) throw std::domain_error("lattice mismatch");
    CellRange r = w.fn.range_of_cube(Q);
    auto fam = dyadic_family(w);
    HolweightResult res;

    res.line1.lhs = average_range(f, p, r);
    res.line1.rhs = std::pow(a_p(w, q / p, fam).value, 1.0 / q) * weighted_avg(f, q, w, r);
    res.line1.pass = res.line1.lhs <= res.line1.rhs * (1.0 + 1e-9);

    double qp = ex::conj(q);
    double pp = ex::conj(p);
    double wq = weight_mass(w, r);
    LatticeFunction gw = multiply(g, w.fn);
    double measQ = cube_measure(Q).to_double();
    res.line2.lhs = average_range(gw, qp, r) * measQ;
    res.line2.rhs = std::pow(rh(w, ex::conj(q / p), fam).value, 1.0 / p) * weighted_avg(g, pp, w, r) * wq;
    res.line2.pass = res.line2.lhs <= res.line2.rhs * (1.0 + 1e-9);

    res.pass = res.line1.pass && res.line2.pass;
    return res;
}

std::string ConstantsReport::to_csv() const {
    CsvTable t;
    t.header = {"name", "value", "attaining_shift", "attaining_level", "attaining_index"};
    for (const auto& e : entries) {
        t.rows.push_back({e.name, format_double(e.value), int_vector_to_string(e.attaining.shift.t),
                          std::to_string(e.attaining.level), int_vector_to_string(e.attaining.m)});
    }
    return t.to_string();
}

std::string ConstantsReport::to_json() const {
    std::string out = "[\n";
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        out += "  { \"name\": \"" + e.name + "\", \"value\": " + format_double(e.value) +
               ", \"attaining\": " + cube_to_json(e.attaining) + " }";
        if (i + 1 < entries.size()) out += ",";
        out += "\n";
    }
    out += "]\n";
    return out;
}

}  // namespace hx
