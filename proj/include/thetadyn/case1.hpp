#ifndef THETADYN_CASE1_HPP
#define THETADYN_CASE1_HPP

// Closed-form structure prediction for k = +-1/2 mod p. Cycle lengths come
// from multiplicative orders of +-2 modulo the odd divisors of q-1; every
// cyclic vertex outside {1, -1} roots a reversed binary tree whose depth is
// the 2-adic valuation of q-1.

#include <map>
#include <optional>

#include "projdyn.hpp"
#include "report.hpp"

namespace thetadyn {

enum class Case1Sign { plus, minus };  // theta_{1/2} vs theta_{-1/2}

struct Case1Input {
    i64 p = 0, n = 0, q = 0;
    Case1Sign sign = Case1Sign::plus;
    std::vector<i64> odd_divisors;  // odd d > 1 dividing q-1, ascending
    int two_exponent = 0;           // e with 2^e || q-1

    static Case1Input make(i64 p, i64 n, Case1Sign sign, i64 domain_limit = kDefaultDomainLimit) {
        if (!is_prime(p) || p == 2)
            throw Error(errc::invalid_case, "case 1 needs an odd prime p");
        Case1Input in;
        in.p = p;
        in.n = n;
        in.sign = sign;
        i128 q = 1;
        for (i64 i = 0; i < n; ++i) {
            q *= p;
            if (q > domain_limit) throw Error(errc::domain_too_large, "q exceeds limit");
        }
        in.q = (i64)q;
        auto [odd, e] = split_order(in.q - 1);
        in.two_exponent = e;
        for (i64 d : divisors_of(odd))
            if (d > 1) in.odd_divisors.push_back(d);
        std::sort(in.odd_divisors.begin(), in.odd_divisors.end());
        return in;
    }

    i64 base() const { return sign == Case1Sign::plus ? 2 : -2; }
};

inline StructureReport predict_case1(const Case1Input& in) {
    StructureReport rep;
    rep.case_name = in.sign == Case1Sign::plus ? "case1+" : "case1-";
    const int e = in.two_exponent;
    const std::string tree = encode_tree(generic_root_tree(e));

    // aggregate cycle counts per order of +-2 mod d over the odd divisors d
    std::map<i64, i64> phi_sum;  // length -> sum of phi(d) with ord_d(base) = length
    for (i64 d : in.odd_divisors) {
        i64 len = mult_order_mod(mod_reduce(in.base(), d), d);
        phi_sum[len] += euler_phi(d);
    }

    if (in.sign == Case1Sign::plus) {
        // three fixed points: 1, -1, infinity
        if (phi_sum.count(1))
            throw Error(errc::internal, "order of 2 cannot be 1 for an odd divisor > 1");
        rep.classes.push_back({1, 2, bare_root_encoding(), "fixed points 1 and -1 (no tree)"});
        rep.classes.push_back({1, 1, tree, "fixed point at infinity"});
        for (auto [len, phis] : phi_sum) {
            if (phis % len)
                throw Error(errc::internal, "cycle count formula does not divide evenly");
            rep.classes.push_back({len, phis / len, tree,
                                   "orbits of elements whose psi-image has odd order with ord(2) = " +
                                       std::to_string(len)});
        }
    } else {
        if (phi_sum.count(2))
            throw Error(errc::internal, "order of -2 cannot be 2 for an odd divisor > 1");
        rep.classes.push_back({2, 1, bare_root_encoding(), "the 2-cycle {1, -1} (no trees)"});
        // fixed points: infinity always; the square roots of -1/3 exactly when
        // p = 1 mod 3, or n even with p != 3 (these are the odd-order-3 class)
        bool extra_fixed = (in.p % 3 == 1) || (in.n % 2 == 0 && in.p != 3);
        rep.classes.push_back({1, 1, tree, "fixed point at infinity"});
        if (extra_fixed)
            rep.classes.push_back({1, 2, tree, "fixed square roots of -1/3"});
        if (in.p == 3)
            rep.notes.push_back("p = 3: no square roots of -1/3 exist; fixed-point count is 1");
        for (auto [len, phis] : phi_sum) {
            if (len == 1) {
                // the d = 3 class: the same two fixed points already counted above
                if (!extra_fixed || phis != 2)
                    throw Error(errc::internal, "odd-order-3 class inconsistent with fixed-point rule");
                rep.notes.push_back(
                    "divisor 3 contributes the two fixed points already counted (not doubled)");
                continue;
            }
            if (phis % len)
                throw Error(errc::internal, "cycle count formula does not divide evenly");
            rep.classes.push_back({len, phis / len, tree,
                                   "orbits of elements whose psi-image has odd order with ord(-2) = " +
                                       std::to_string(len)});
        }
    }

    rep.tree_plan.push_back({"cyclic vertices 1 and -1", 0, bare_root_encoding()});
    rep.tree_plan.push_back({"every other cyclic vertex", e, tree});
    rep.notes.push_back("tree level criterion: a vertex at level j > 0 has 2^j || ord(psi(vertex))");
    return rep;
}

// Cycle length of a periodic point, or nullopt for pre-periodic points.
inline std::optional<i64> period_of_element(const Case1Input& in, const FieldCtx& F,
                                            const ProjPoint& x) {
    if (x.infinite) return 1;
    if (x.v == F.one() || x.v == F.from_int(-1))
        return in.sign == Case1Sign::plus ? 1 : 2;
    auto image = psi_apply(F, x);
    if (image.infinite || F.is_zero(image.v))
        throw Error(errc::internal, "psi image degenerate outside the special points");
    i64 t = F.mul_order(image.v);
    auto [odd, two_exp] = split_order(t);
    if (two_exp != 0) return std::nullopt;  // even order: pre-periodic
    return mult_order_mod(mod_reduce(in.base(), odd), odd);
}

// Number of theta-preimages (0 or 2) of a non-periodic gamma outside {1, -1}.
inline int preimage_count_case1(const Case1Input& in, const FieldCtx& F, const FieldElem& gamma) {
    ProjPoint g = ProjPoint::finite(gamma);
    if (gamma == F.one() || gamma == F.from_int(-1))
        throw Error(errc::periodic_input, "gamma must lie outside {1, -1}");
    if (period_of_element(in, F, g))
        throw Error(errc::periodic_input, "gamma must not be periodic");
    auto image = psi_apply(F, g);
    i64 ord = F.mul_order(image.v);
    i64 two_e = i64(1) << in.two_exponent;
    return ord % two_e == 0 ? 0 : 2;
}

}  // namespace thetadyn

#endif
