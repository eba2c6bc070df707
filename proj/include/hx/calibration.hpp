#pragma once

#include <string>

namespace hx {

// Calibrated constants for the implicit-constant inequalities.  The values
// are frozen in data/calibration.json (and mirrored here as built-in
// defaults); the test suite recomputes them and alarms on drift beyond 5%.
struct Calibration {
    double c_kol;     // Kolmogorov: (1-delta) M((Mf)^delta)/(Mf)^delta
    double c_lem;     // main sparse-form lemma ratio cap
    double c_t_strong;  // strong norm estimate vs thm11 rhs
    double c_t_weak;    // weak norm estimate vs psi(w)
    double c_dual;    // dual weak type rhs factor
    double c_cal;     // Wilson A_inf <= c_cal * A_p ordering
    double c22_c;     // Prop 2.2(iii) c
    double c22_kappa; // Prop 2.2(iii) kappa

    static Calibration builtin();

    // Loads HXLAB_CALIBRATION when set, else the built-in values.
    static const Calibration& active();
    static Calibration load_file(const std::string& path);

    // Hash of the active source ("builtin" or the file bytes).
    static std::string active_hash();

    std::string to_json() const;
};

}  // namespace hx
