#ifndef THETADYN_CMCURVE_HPP
#define THETADYN_CMCURVE_HPP

// The two CM curves behind cases 2 and 3 (y^2 = x^3 + x with endomorphisms
// by Z[i], and y^2 = x^3 - 35x + 98 with endomorphisms by Z[(1+sqrt(-7))/2]):
// point counting, Frobenius as a quadratic integer, the Weierstrass group
// law, the degree-2 endomorphisms, the A/B/C domain partition and the
// conjugation maps of the second curve.

#include <cmath>
#include <memory>

#include "ffield.hpp"
#include "projdyn.hpp"
#include "qring.hpp"

namespace thetadyn {

enum class CurveCase { case2, case3 };

// Constants derived from the defining quadratic of each case, all mod p.
struct CaseParams {
    std::array<i64, 2> root{};  // case2: roots of x^2-2x+2; case3: of x^2-x+2
    std::array<i64, 2> k{};     // k paired with root: alpha^{-2} resp. (sigma-1)/2
    i64 i_p = 0;                // case2: the square root of -1 fixed as 2*k[0]
    std::array<i64, 2> chi_b{}, chi_c{}, chi_d{};  // case3 Mobius conjugator
};

struct FrobeniusData {
    i64 m = 0;      // |E(F_p)|
    i64 trace = 0;  // p + 1 - m
    i64 d = 0;      // trace^2 - 4p
    QuadInt pi;     // Frobenius in the ring basis, norm p, b-coordinate > 0
};

struct ECPoint {
    bool at_infinity = true;
    FieldElem x, y;

    static ECPoint infinity() { return ECPoint{}; }
    static ECPoint affine(FieldElem px, FieldElem py) {
        return ECPoint{false, std::move(px), std::move(py)};
    }
    bool operator==(const ECPoint& o) const {
        if (at_infinity != o.at_infinity) return false;
        return at_infinity || (x == o.x && y == o.y);
    }
    bool operator!=(const ECPoint& o) const { return !(*this == o); }
};

inline i64 curve_a_for(CurveCase tag) { return tag == CurveCase::case2 ? 1 : -35; }
inline i64 curve_b_for(CurveCase tag) { return tag == CurveCase::case2 ? 0 : 98; }

inline void require_residue_class(CurveCase tag, i64 p) {
    if (tag == CurveCase::case2) {
        if (p % 4 != 1)
            throw Error(errc::wrong_residue_class, "case 2 needs p = 1 (mod 4)");
    } else {
        i64 r = p % 7;
        if (r != 1 && r != 2 && r != 4)
            throw Error(errc::wrong_residue_class, "case 3 needs p = 1, 2 or 4 (mod 7)");
    }
}

inline CaseParams case_params(CurveCase tag, i64 p) {
    require_residue_class(tag, p);
    CaseParams cp;
    if (tag == CurveCase::case2) {
        i64 s = sqrt_mod_prime(mod_reduce(-4, p), p);  // discriminant of x^2-2x+2
        i64 half = mod_inverse(2, p);
        i64 r1 = mod_reduce(mod_mul(2 + s, half, p), p);
        i64 r2 = mod_reduce(mod_mul(2 - s + 2 * p, half, p), p);
        if (r1 > r2) std::swap(r1, r2);
        cp.root = {r1, r2};
        for (int i = 0; i < 2; ++i)
            cp.k[i] = mod_inverse(mod_mul(cp.root[i], cp.root[i], p), p);
        cp.i_p = mod_reduce(2 * cp.k[0], p);
    } else {
        i64 s = sqrt_mod_prime(mod_reduce(-7, p), p);  // discriminant of x^2-x+2
        i64 half = mod_inverse(2, p);
        i64 r1 = mod_reduce(mod_mul(1 + s, half, p), p);
        i64 r2 = mod_reduce(mod_mul(1 - s + 2 * p, half, p), p);
        if (r1 > r2) std::swap(r1, r2);
        cp.root = {r1, r2};
        for (int i = 0; i < 2; ++i) {
            i64 k = mod_mul(mod_reduce(cp.root[i] - 1, p), half, p);
            cp.k[i] = k;
            i64 den_inv = mod_inverse(mod_reduce(4 * k + 1, p), p);
            cp.chi_b[i] = mod_reduce(k + mod_mul(5, half, p), p);
            cp.chi_c[i] = mod_reduce(-den_inv, p);
            cp.chi_d[i] = mod_mul(mod_reduce(half + k, p), den_inv, p);
        }
    }
    return cp;
}

// |E(F_p)| by exhaustive character sum.
inline i64 count_points(CurveCase tag, i64 p, i64 domain_limit = kDefaultDomainLimit) {
    if (p > domain_limit) throw Error(errc::domain_too_large, "point count beyond limit");
    i64 a = mod_reduce(curve_a_for(tag), p), b = mod_reduce(curve_b_for(tag), p);
    i64 total = 1;  // the point at infinity
    for (i64 x = 0; x < p; ++x) {
        i64 rhs = mod_reduce(mod_mul(mod_mul(x, x, p), x, p) + mod_mul(a, x, p) + b, p);
        total += 1 + legendre(rhs, p);
    }
    return total;
}

inline FrobeniusData frobenius_elem(CurveCase tag, i64 p, i64 m) {
    FrobeniusData fd;
    fd.m = m;
    fd.trace = p + 1 - m;
    fd.d = checked_i64(i128(fd.trace) * fd.trace - 4 * i128(p), "frobenius discriminant");
    if (fd.d >= 0) throw Error(errc::not_in_ring, "frobenius discriminant not negative");
    auto isqrt = [](i64 v) {
        i64 r = (i64)std::llround(std::sqrt((double)v));
        while (r * r > v) --r;
        while ((r + 1) * (r + 1) <= v) ++r;
        return r;
    };
    if (tag == CurveCase::case2) {
        if (fd.trace % 2) throw Error(errc::not_in_ring, "odd trace for the Gaussian curve");
        i64 s2 = p - (fd.trace / 2) * (fd.trace / 2);
        i64 s = isqrt(s2);
        if (s * s != s2 || s == 0)
            throw Error(errc::not_in_ring, "frobenius does not lie in Z[i]");
        fd.pi = {fd.trace / 2, s};
    } else {
        i64 u2 = (-fd.d) / 7;
        if (u2 * 7 != -fd.d) throw Error(errc::not_in_ring, "discriminant not -7 times a square");
        i64 u = isqrt(u2);
        if (u * u != u2 || u == 0 || (fd.trace - u) % 2 != 0)
            throw Error(errc::not_in_ring, "frobenius does not lie in Z[(1+sqrt(-7))/2]");
        fd.pi = {(fd.trace - u) / 2, u};
    }
    RingCtx R(tag == CurveCase::case2 ? RingKind::gaussian : RingKind::kleinian7);
    if (R.norm(fd.pi) != p || fd.pi.a * 2 + (tag == CurveCase::case2 ? 0 : fd.pi.b) != fd.trace)
        throw Error(errc::not_in_ring, "frobenius validation failed");
    return fd;
}

struct CurveCtx {
    CurveCase tag = CurveCase::case2;
    i64 p = 0, n = 0;
    i64 a = 0, b = 0;  // curve coefficients reduced mod p
    RingCtx ring{RingKind::gaussian};
    CaseParams params;
    FrobeniusData frob;
    std::shared_ptr<const FieldCtx> base;  // F_{p^n}
    std::shared_ptr<const FieldCtx> ext;   // F_{p^{2n}}, present when requested
    std::vector<FieldElem> embed_pow;      // powers of the base-modulus root inside ext

    const FieldCtx& field(bool extension) const {
        if (!extension) return *base;
        if (!ext) throw Error(errc::internal, "extension field was not built");
        return *ext;
    }

    // Embedding F_{p^n} -> F_{p^{2n}} through the stored root powers.
    FieldElem embed(const FieldElem& x) const {
        const FieldCtx& E = field(true);
        FieldElem acc = E.zero();
        for (i64 i = 0; i < n; ++i)
            acc = E.add(acc, E.scalar_mul(x.c[i], embed_pow[i]));
        return acc;
    }

    FieldElem coeff_a(const FieldCtx& F) const { return F.from_int(a); }
    FieldElem coeff_b(const FieldCtx& F) const { return F.from_int(b); }
};

inline CurveCtx build_curve(CurveCase tag, std::shared_ptr<const FieldCtx> base,
                            bool with_extension = false,
                            i64 domain_limit = kDefaultDomainLimit) {
    if (!base) throw Error(errc::internal, "build_curve: null base field");
    CurveCtx C;
    C.tag = tag;
    C.p = base->p;
    C.n = base->n;
    C.a = mod_reduce(curve_a_for(tag), C.p);
    C.b = mod_reduce(curve_b_for(tag), C.p);
    C.ring = RingCtx(tag == CurveCase::case2 ? RingKind::gaussian : RingKind::kleinian7);
    C.params = case_params(tag, C.p);
    C.frob = frobenius_elem(tag, C.p, count_points(tag, C.p, domain_limit));
    C.base = std::move(base);
    // nonsingularity: -16(4a^3 + 27b^2) != 0 mod p
    i64 disc = mod_reduce(4 * mod_pow(C.a, 3, C.p) + 27 * mod_mul(C.b, C.b, C.p), C.p);
    if (disc == 0) throw Error(errc::wrong_residue_class, "curve is singular mod p");

    if (with_extension) {
        auto E = std::make_shared<FieldCtx>(FieldCtx::build(C.p, 2 * C.n, std::nullopt, domain_limit));
        // locate a root of the base modulus inside the extension
        FieldElem root = E->zero();
        bool found = false;
        for (i64 code = 0; code < E->q && !found; ++code) {
            FieldElem cand = E->elem_from_code(code);
            FieldElem acc = E->zero();  // Horner from the top coefficient
            for (i64 i = C.n; i >= 0; --i)
                acc = E->add(E->mul(acc, cand), E->from_int(C.base->modulus[i]));
            if (E->is_zero(acc)) {
                root = cand;
                found = true;
            }
        }
        if (!found) throw Error(errc::internal, "no root of the base modulus in the extension");
        C.embed_pow.resize(C.n);
        FieldElem pw = E->one();
        for (i64 i = 0; i < C.n; ++i) {
            C.embed_pow[i] = pw;
            pw = E->mul(pw, root);
        }
        C.ext = std::move(E);
    }
    return C;
}

// ---- Weierstrass group law (affine, chord and tangent) ----

inline bool on_curve(const CurveCtx& C, const FieldCtx& F, const ECPoint& P) {
    if (P.at_infinity) return true;
    FieldElem lhs = F.mul(P.y, P.y);
    FieldElem rhs = F.add(F.add(F.mul(F.mul(P.x, P.x), P.x), F.mul(C.coeff_a(F), P.x)),
                          C.coeff_b(F));
    return lhs == rhs;
}

inline void require_on_curve(const CurveCtx& C, const FieldCtx& F, const ECPoint& P) {
    if (!on_curve(C, F, P)) throw Error(errc::point_not_on_curve, "point fails curve equation");
}

inline ECPoint ec_neg(const FieldCtx& F, const ECPoint& P) {
    if (P.at_infinity) return P;
    return ECPoint::affine(P.x, F.neg(P.y));
}

inline ECPoint ec_add(const CurveCtx& C, const FieldCtx& F, const ECPoint& P, const ECPoint& Q) {
    if (P.at_infinity) return Q;
    if (Q.at_infinity) return P;
    if (P.x == Q.x) {
        if (P.y != Q.y || F.is_zero(P.y)) return ECPoint::infinity();
        // tangent: (3x^2 + a) / 2y
        FieldElem num = F.add(F.scalar_mul(3, F.mul(P.x, P.x)), C.coeff_a(F));
        FieldElem slope = F.div(num, F.scalar_mul(2, P.y));
        FieldElem x3 = F.sub(F.mul(slope, slope), F.scalar_mul(2, P.x));
        FieldElem y3 = F.sub(F.mul(slope, F.sub(P.x, x3)), P.y);
        return ECPoint::affine(x3, y3);
    }
    FieldElem slope = F.div(F.sub(Q.y, P.y), F.sub(Q.x, P.x));
    FieldElem x3 = F.sub(F.sub(F.mul(slope, slope), P.x), Q.x);
    FieldElem y3 = F.sub(F.mul(slope, F.sub(P.x, x3)), P.y);
    return ECPoint::affine(x3, y3);
}

inline ECPoint ec_smul(const CurveCtx& C, const FieldCtx& F, i64 s, ECPoint P) {
    if (s < 0) {
        s = -s;
        P = ec_neg(F, P);
    }
    ECPoint acc = ECPoint::infinity();
    while (s > 0) {
        if (s & 1) acc = ec_add(C, F, acc, P);
        P = ec_add(C, F, P, P);
        s >>= 1;
    }
    return acc;
}

// Coordinate-wise q-power Frobenius (q = p^e).
inline ECPoint frobenius_map(const FieldCtx& F, const ECPoint& P, i64 q) {
    if (P.at_infinity) return P;
    return ECPoint::affine(F.pow(P.x, q), F.pow(P.y, q));
}

// ---- the degree-2 endomorphisms ----

inline ECPoint endo_apply(const CurveCtx& C, int sigma_idx, const FieldCtx& F, const ECPoint& P) {
    require_on_curve(C, F, P);
    if (P.at_infinity) return P;
    if (C.tag == CurveCase::case2) {
        i64 k = C.params.k[sigma_idx], alpha = C.params.root[sigma_idx];
        if (F.is_zero(P.x)) return ECPoint::infinity();
        FieldElem x2 = F.mul(P.x, P.x);
        FieldElem xx = F.scalar_mul(k, F.div(F.add(x2, F.one()), P.x));
        FieldElem yy = F.scalar_mul(mod_mul(k, mod_inverse(alpha, C.p), C.p),
                                    F.mul(P.y, F.div(F.sub(x2, F.one()), x2)));
        ECPoint img = ECPoint::affine(xx, yy);
        if (!on_curve(C, F, img)) throw Error(errc::internal, "endomorphism image off curve");
        return img;
    }
    i64 sigma = C.params.root[sigma_idx];
    i64 s2 = mod_mul(sigma, sigma, C.p);
    FieldElem pole = F.from_int(mod_reduce(-s2 + 2, C.p));
    if (P.x == pole) return ECPoint::infinity();
    // 7 * (1 - sigma)^4 and the shifted denominator x + sigma^2 - 2
    i64 c7 = mod_mul(7, mod_pow(mod_reduce(1 - sigma, C.p), 4, C.p), C.p);
    FieldElem den = F.sub(P.x, pole);
    FieldElem frac = F.div(F.from_int(c7), den);
    FieldElem xx = F.scalar_mul(mod_inverse(s2, C.p), F.sub(P.x, frac));
    FieldElem yfac = F.add(F.one(), F.div(F.from_int(c7), F.mul(den, den)));
    FieldElem yy = F.scalar_mul(mod_inverse(mod_mul(s2, sigma, C.p), C.p), F.mul(P.y, yfac));
    ECPoint img = ECPoint::affine(xx, yy);
    if (!on_curve(C, F, img)) throw Error(errc::internal, "endomorphism image off curve");
    return img;
}

// ---- case-3 conjugation maps on P^1(F_{p^n}) ----

inline ProjPoint eta_apply(const CurveCtx& C, int sigma_idx, const ProjPoint& x) {
    if (C.tag != CurveCase::case3) throw Error(errc::invalid_case, "eta is a case-3 map");
    const FieldCtx& F = *C.base;
    i64 sigma = C.params.root[sigma_idx];
    i64 s2 = mod_mul(sigma, sigma, C.p);
    FieldElem pole = F.from_int(mod_reduce(-s2 + 2, C.p));
    if (x.infinite || x.v == pole) return ProjPoint::infinity();
    i64 c7 = mod_mul(7, mod_pow(mod_reduce(1 - sigma, C.p), 4, C.p), C.p);
    FieldElem den = F.sub(x.v, pole);
    FieldElem val = F.scalar_mul(mod_inverse(s2, C.p), F.sub(x.v, F.div(F.from_int(c7), den)));
    return ProjPoint::finite(val);
}

inline ProjPoint chi_apply(const CurveCtx& C, int sigma_idx, const ProjPoint& x) {
    if (C.tag != CurveCase::case3) throw Error(errc::invalid_case, "chi is a case-3 map");
    const FieldCtx& F = *C.base;
    i64 b = C.params.chi_b[sigma_idx], c = C.params.chi_c[sigma_idx],
        d = C.params.chi_d[sigma_idx];
    if (x.infinite) return ProjPoint::finite(F.from_int(mod_inverse(c, C.p)));
    FieldElem num = F.add(x.v, F.from_int(b));
    FieldElem den = F.add(F.scalar_mul(c, x.v), F.from_int(d));
    if (F.is_zero(den)) return ProjPoint::infinity();
    return ProjPoint::finite(F.div(num, den));
}

inline ProjPoint chi_inv(const CurveCtx& C, int sigma_idx, const ProjPoint& x) {
    if (C.tag != CurveCase::case3) throw Error(errc::invalid_case, "chi is a case-3 map");
    const FieldCtx& F = *C.base;
    i64 b = C.params.chi_b[sigma_idx], c = C.params.chi_c[sigma_idx],
        d = C.params.chi_d[sigma_idx];
    if (x.infinite)
        return ProjPoint::finite(F.from_int(mod_reduce(-mod_mul(d, mod_inverse(c, C.p), C.p), C.p)));
    FieldElem num = F.sub(F.scalar_mul(d, x.v), F.from_int(b));
    FieldElem den = F.sub(F.one(), F.scalar_mul(c, x.v));
    if (F.is_zero(den)) return ProjPoint::infinity();
    return ProjPoint::finite(F.div(num, den));
}

// ---- domain partition and point lifting ----

// x-coordinates lifting over the base field go to A, the rest to B; in the
// Gaussian case with n odd and p = +-3 (mod 8) the pair {1, -1} forms C.
struct DomainPartition {
    std::vector<char> cls;  // indexed by element code: 'A', 'B' or 'C'
    i64 count_a = 0;        // includes the point at infinity
    i64 count_b = 0;
    i64 count_c = 0;
    bool split_off_c = false;
    std::vector<ECPoint> star_set;  // over the extension, when built
};

inline bool case2_variant_with_c(const CurveCtx& C) {
    return C.tag == CurveCase::case2 && C.n % 2 == 1 && (C.p % 8 == 3 || C.p % 8 == 5);
}

inline std::vector<ECPoint> star_points(const CurveCtx& C) {
    const FieldCtx& E = C.field(true);
    std::vector<ECPoint> star;
    star.push_back(ECPoint::infinity());
    if (C.tag == CurveCase::case2) {
        star.push_back(ECPoint::affine(E.zero(), E.zero()));
        star.push_back(ECPoint::affine(E.from_int(C.params.i_p), E.zero()));
        star.push_back(ECPoint::affine(E.from_int(-C.params.i_p), E.zero()));
        if (case2_variant_with_c(C)) {
            FieldElem lambda = E.sqrt(E.from_int(2)).first;
            FieldElem tau = E.sqrt(E.from_int(-2)).first;
            star.push_back(ECPoint::affine(E.one(), lambda));
            star.push_back(ECPoint::affine(E.one(), E.neg(lambda)));
            star.push_back(ECPoint::affine(E.from_int(-1), tau));
            star.push_back(ECPoint::affine(E.from_int(-1), E.neg(tau)));
        }
    } else {
        i64 s0 = C.params.root[0], s1 = C.params.root[1];
        star.push_back(ECPoint::affine(E.from_int(-7), E.zero()));
        star.push_back(ECPoint::affine(E.from_int(s0 + 3), E.zero()));
        star.push_back(ECPoint::affine(E.from_int(s1 + 3), E.zero()));
    }
    for (const auto& P : star) require_on_curve(C, E, P);
    return star;
}

inline DomainPartition partition_domain(const CurveCtx& C) {
    const FieldCtx& F = *C.base;
    DomainPartition part;
    part.cls.resize(F.q);
    for (i64 code = 0; code < F.q; ++code) {
        FieldElem x = F.elem_from_code(code);
        FieldElem rhs = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(C.coeff_a(F), x)),
                              C.coeff_b(F));
        part.cls[code] = F.is_square(rhs) ? 'A' : 'B';
    }
    part.split_off_c = case2_variant_with_c(C);
    if (part.split_off_c) {
        for (i64 v : {i64(1), i64(-1)}) {
            i64 code = F.code(F.from_int(v));
            if (part.cls[code] != 'B')
                throw Error(errc::internal, "1 and -1 must lift only over the extension here");
            part.cls[code] = 'C';
        }
    }
    part.count_a = 1;  // infinity
    for (char c : part.cls)
        c == 'A' ? ++part.count_a : (c == 'B' ? ++part.count_b : ++part.count_c);
    if (C.ext) part.star_set = star_points(C);
    return part;
}

// The 0, 1 or 2 points over the chosen field with the given base x-coordinate.
inline std::vector<ECPoint> lift_points(const CurveCtx& C, const FieldElem& x, bool extension) {
    const FieldCtx& F = C.field(extension);
    FieldElem xe = extension ? C.embed(x) : x;
    FieldElem rhs = F.add(F.add(F.mul(F.mul(xe, xe), xe), F.mul(C.coeff_a(F), xe)),
                          C.coeff_b(F));
    if (F.is_zero(rhs)) return {ECPoint::affine(xe, F.zero())};
    if (!F.is_square(rhs)) return {};
    auto [y1, y2] = F.sqrt(rhs);
    return {ECPoint::affine(xe, y1), ECPoint::affine(xe, y2)};
}

// Whether (pi_p^n + 1) P = O over F_{p^{2n}}, via Frobenius powering plus one
// addition; equivalent to membership in the twist kernel.
inline bool twist_kernel_check(const CurveCtx& C, const ECPoint& P) {
    const FieldCtx& E = C.field(true);
    require_on_curve(C, E, P);
    i64 qn = 1;
    for (i64 i = 0; i < C.n; ++i) qn *= C.p;
    ECPoint img = frobenius_map(E, P, qn);
    return ec_add(C, E, img, P) == ECPoint::infinity();
}

}  // namespace thetadyn

#endif
