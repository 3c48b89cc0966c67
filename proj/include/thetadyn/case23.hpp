#ifndef THETADYN_CASE23_HPP
#define THETADYN_CASE23_HPP

// Structure prediction for the CM cases: factor pi^n -+ 1 in the endomorphism
// order, enumerate admissible order vectors, convert each class into cycle
// length and count, and emit per-side tree plans.
//
// Tree plans follow the corrected rule for the boundary trees of the second
// curve: the trees rooted at infinity and at sigma+3 have depth
// max(e0(pi^n - 1), e0(pi^n + 1)) and glue through the B side whenever the
// A-side valuation is 1 (the two critical preimages then lift only over the
// quadratic extension). The ramified sqrt(-7) component is classified by
// valuation rather than additive order: one additive order covers two
// valuations with different periods once the ramified exponent exceeds 1.

#include <sstream>

#include "cmcurve.hpp"
#include "report.hpp"

namespace thetadyn {

inline std::string quadint_str(const RingCtx& R, QuadInt x) {
    const char* unit = R.kind == RingKind::gaussian ? "i" : "w";
    std::ostringstream os;
    if (x.a || !x.b) os << x.a;
    if (x.b) {
        if (x.a) os << (x.b > 0 ? "+" : "-");
        else if (x.b < 0) os << "-";
        i64 mag = x.b < 0 ? -x.b : x.b;
        if (mag != 1) os << mag;
        os << unit;
    }
    return os.str();
}

// The norm-2 prime representing the chosen degree-2 endomorphism: alpha when
// the defining congruence holds mod pi_p, its conjugate otherwise.
inline QuadInt rho0_select(const CurveCtx& C, int sigma_idx) {
    const RingCtx& R = C.ring;
    QuadInt alpha = C.tag == CurveCase::case2 ? QuadInt{1, 1} : QuadInt{0, 1};
    QuadInt alpha_bar = R.conj(alpha);
    auto matches = [&](QuadInt cand) {
        if (C.tag == CurveCase::case2) {
            // cand^{-2} = k_sigma (mod pi)  <=>  pi | cand^2 * k - 1
            QuadInt lhs = R.mul(R.mul(cand, cand), R.from_int(C.params.k[sigma_idx]));
            return R.divides(C.frob.pi, R.sub(lhs, {1, 0}));
        }
        return R.divides(C.frob.pi, R.sub(cand, R.from_int(C.params.root[sigma_idx])));
    };
    bool a = matches(alpha), b = matches(alpha_bar);
    if (a == b) throw Error(errc::no_match, "exactly one norm-2 prime must match the congruence");
    return a ? alpha : alpha_bar;
}

struct SideFactorization {
    QuadInt rho0;
    QuadInt target;  // pi^n -+ 1
    QuadFactorization fact;
    std::vector<ResidueComponent> comps;  // aligned with fact.factors
    int e0 = 0;
    int j_conj = -1;  // index of the split norm-2 component (second curve)
    int e_f = 0;      // ramified sqrt(-7) exponent
};

inline SideFactorization side_factorization(const CurveCtx& C, char side, int sigma_idx) {
    if (side != 'A' && side != 'B') throw Error(errc::internal, "side must be 'A' or 'B'");
    SideFactorization sf;
    const RingCtx& R = C.ring;
    sf.rho0 = rho0_select(C, sigma_idx);
    QuadInt pin = R.pow(C.frob.pi, C.n);
    sf.target = side == 'A' ? R.sub(pin, {1, 0}) : R.add(pin, {1, 0});
    sf.fact = factor(R, sf.target, sf.rho0);
    sf.e0 = sf.fact.factors[0].exponent;
    if (sf.e0 < 1) throw Error(errc::factorization_failure, "rho0 must divide the target");
    for (size_t i = 0; i < sf.fact.factors.size(); ++i) {
        const auto& f = sf.fact.factors[i];
        sf.comps.push_back(component_table(R, f.prime, f.exponent, f.kind));
        if (f.kind == PrimeKind::split && R.norm(f.prime) == 2) sf.j_conj = (int)i;
        if (f.kind == PrimeKind::ramified) sf.e_f = f.exponent;
    }
    if (C.tag == CurveCase::case3 && sf.j_conj < 0)
        throw Error(errc::factorization_failure,
                    "the conjugate norm-2 prime must divide the target on both sides");
    return sf;
}

struct SidePrediction {
    char side = 'A';
    int e0 = 0;
    int exceptional_depth = 0;  // depth of the boundary trees rooted on this side
    std::vector<CycleClassPrediction> classes;
    std::vector<TreePlanEntry> tree_plan;
    std::vector<std::string> notes;
};

namespace detail {

inline std::string h_str(const std::vector<int>& h) {
    std::string s = "(";
    for (size_t i = 0; i < h.size(); ++i) s += (i ? "," : "") + std::to_string(h[i]);
    return s + ")";
}

}  // namespace detail

inline SidePrediction predict_side(const CurveCtx& C, char side, int sigma_idx) {
    SidePrediction out;
    out.side = side;
    SideFactorization sf = side_factorization(C, side, sigma_idx);
    SideFactorization other = side_factorization(C, side == 'A' ? 'B' : 'A', sigma_idx);
    out.e0 = sf.e0;
    const RingCtx& R = C.ring;

    const std::string generic_enc = encode_tree(generic_root_tree(sf.e0));
    std::string inf_enc, boundary_enc;
    if (C.tag == CurveCase::case2) {
        if (case2_variant_with_c(C)) {
            if (sf.e0 != 2 && side == 'A')
                throw Error(errc::internal, "variant with C forces e0 = 2 on the A side");
            out.exceptional_depth = 3;
            inf_enc = encode_tree(pinched_level2_tree(3));
        } else {
            if (side == 'A' && sf.e0 < 3)
                throw Error(errc::internal, "this variant forces e0 >= 3 on the A side");
            out.exceptional_depth = sf.e0;
            inf_enc = side == 'A' ? encode_tree(pinched_level2_tree(sf.e0)) : "";
        }
    } else {
        // boundary trees extend to the deeper of the two sides
        out.exceptional_depth = std::max(sf.e0, other.e0);
        if (std::min(sf.e0, other.e0) != 1)
            throw Error(errc::internal, "exactly one side of the sqrt(-7) curve has e0 = 1");
        inf_enc = boundary_enc = encode_tree(pinched_level1_tree(out.exceptional_depth));
    }

    // Admissible annihilator classes per component: pairs of (exponent d of
    // the prime annihilating the class, element count). For cyclic and inert
    // components d is the additive-order exponent; the ramified component is
    // keyed by sqrt(-7)-valuation instead, since elements of one additive
    // order split into two valuations there (the keys coincide for e_f <= 1).
    struct AnnClass {
        int exp;
        i64 count;
    };
    std::vector<std::vector<AnnClass>> comp_classes(sf.comps.size());
    for (size_t i = 0; i < sf.comps.size(); ++i) {
        const auto& comp = sf.comps[i];
        if (comp.kind == PrimeKind::norm2) {
            comp_classes[i] = {{0, 1}};  // periodic points have a vanishing rho0 part
        } else if (comp.kind == PrimeKind::ramified) {
            comp_classes[i].push_back({0, 1});
            i64 cnt = 6;
            for (int d = 1; d <= comp.exponent; ++d) {
                comp_classes[i].push_back({d, cnt});
                cnt *= 7;
            }
            if (comp.exponent >= 2)
                out.notes.push_back("ramified component with exponent " +
                                    std::to_string(comp.exponent) +
                                    ": classes keyed by sqrt(-7)-valuation");
        } else {
            for (int d = 0; d <= comp.h_max(); ++d)
                comp_classes[i].push_back({d, comp.order_counts[d]});
        }
    }

    std::vector<size_t> pick(sf.comps.size(), 0);
    auto advance = [&]() {
        for (size_t i = sf.comps.size(); i-- > 1;) {
            if (pick[i] + 1 < comp_classes[i].size()) {
                ++pick[i];
                return true;
            }
            pick[i] = 0;
        }
        return false;
    };
    do {
        std::vector<int> d(sf.comps.size());
        for (size_t i = 0; i < pick.size(); ++i) d[i] = comp_classes[i][pick[i]].exp;
        bool all_zero = true;
        for (int v : d) all_zero &= v == 0;
        bool conj_only = C.tag == CurveCase::case3 && sf.j_conj >= 0 && d[sf.j_conj] == 1;
        if (conj_only)
            for (size_t i = 0; i < d.size(); ++i)
                if ((int)i != sf.j_conj) conj_only &= d[i] == 0;

        if (all_zero) {
            if (side == 'A') out.classes.push_back({1, 1, inf_enc, "fixed point at infinity"});
            continue;  // B side: the zero class is the point at infinity, not in B
        }
        if (conj_only) {
            if (side == 'A')
                out.classes.push_back({1, 1, boundary_enc, "boundary fixed point sigma+3"});
            continue;  // B side: this class is the boundary fixed point, not in B
        }
        std::vector<QuadInt> moduli;
        for (size_t i = 0; i < d.size(); ++i)
            if (d[i] > 0) moduli.push_back(R.pow(sf.comps[i].prime, d[i]));
        i64 l = cycle_length_for_moduli(R, sf.rho0, moduli);
        i128 raw = 1;
        for (size_t i = 0; i < pick.size(); ++i) raw *= comp_classes[i][pick[i]].count;
        if (raw % (2 * l) != 0)
            throw Error(errc::internal, "class size not divisible by twice the cycle length");
        i64 count = checked_i64(raw / (2 * l), "cycle class count");
        out.classes.push_back({l, count, generic_enc,
                               std::string(1, side) + "-side class h=" + detail::h_str(d)});
    } while (advance());

    out.tree_plan.push_back({std::string("generic ") + side + "-side cyclic vertex", sf.e0,
                             generic_enc});
    if (side == 'A') {
        out.tree_plan.push_back({"infinity", out.exceptional_depth, inf_enc});
        if (C.tag == CurveCase::case3)
            out.tree_plan.push_back({"boundary fixed point sigma+3", out.exceptional_depth,
                                     boundary_enc});
    }

    out.notes.push_back(std::string(1, side) + "-side: " +
                        quadint_str(R, sf.target) + " = unit " + quadint_str(R, sf.fact.unit) +
                        " times rho0^" + std::to_string(sf.e0) + ", rho0 = " +
                        quadint_str(R, sf.rho0));
    return out;
}

inline StructureReport predict_case23(const CurveCtx& C, i64 k) {
    i64 kr = mod_reduce(k, C.p);
    int sigma_idx = -1;
    for (int i = 0; i < 2; ++i)
        if (C.params.k[i] == kr) sigma_idx = i;
    if (sigma_idx < 0)
        throw Error(errc::k_not_in_case, "k does not belong to this curve's parameter pair");

    StructureReport rep;
    rep.case_name = C.tag == CurveCase::case2 ? "case2" : "case3";
    rep.notes.push_back("frobenius pi = " + quadint_str(C.ring, C.frob.pi) +
                        " (positive second coordinate fixed; the conjugate choice gives the "
                        "same structure)");
    for (char side : {'A', 'B'}) {
        SidePrediction sp = predict_side(C, side, sigma_idx);
        rep.classes.insert(rep.classes.end(), sp.classes.begin(), sp.classes.end());
        rep.tree_plan.insert(rep.tree_plan.end(), sp.tree_plan.begin(), sp.tree_plan.end());
        rep.notes.insert(rep.notes.end(), sp.notes.begin(), sp.notes.end());
    }
    return rep;
}

}  // namespace thetadyn

#endif
