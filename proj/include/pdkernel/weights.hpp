#pragma once

#include <cmath>
#include <string>

#include "common.hpp"
#include "persistence.hpp"

namespace pdk {

enum class weight_kind { arc, pers_linear, one, pss_sign };

// Weight on diagram points. arc: atan(C pers^p); pers_linear: clamp(pers / L, 0, 1);
// one: 1; pss_sign: sign(death - birth).
struct weight_fn {
    weight_kind kind = weight_kind::one;
    double c = 1.0;  // arc
    int p = 1;       // arc
    double l = 1.0;  // pers_linear

    static weight_fn arc(double c, int p) {
        require(c > 0.0 && std::isfinite(c), "arc weight needs C > 0");
        require(p >= 1, "arc weight needs a positive integer degree");
        return {weight_kind::arc, c, p, 1.0};
    }
    static weight_fn pers_linear(double l) {
        require(l > 0.0 && std::isfinite(l), "pers_linear weight needs L > 0");
        return {weight_kind::pers_linear, 1.0, 1, l};
    }
    static weight_fn one() { return {}; }
    static weight_fn pss_sign() { return {weight_kind::pss_sign, 1.0, 1, 1.0}; }

    double operator()(double birth, double death) const {
        const double pers = death - birth;
        switch (kind) {
            case weight_kind::arc: return pers > 0.0 ? std::atan(c * std::pow(pers, p)) : 0.0;
            case weight_kind::pers_linear: return pers <= 0.0 ? 0.0 : pers >= l ? 1.0 : pers / l;
            case weight_kind::one: return 1.0;
            case weight_kind::pss_sign: return pers > 0.0 ? 1.0 : pers < 0.0 ? -1.0 : 0.0;
        }
        return 0.0;
    }
    double operator()(const persistence_pair& x) const { return (*this)(x.birth, x.death); }

    std::string name() const {
        switch (kind) {
            case weight_kind::arc: return "arc";
            case weight_kind::pers_linear: return "pers";
            case weight_kind::one: return "one";
            case weight_kind::pss_sign: return "pss";
        }
        return "";
    }
};

inline double eval_weight(const weight_fn& w, const persistence_pair& x) { return w(x); }

}  // namespace pdk
