#ifndef THETADYN_QRING_HPP
#define THETADYN_QRING_HPP

// Exact arithmetic, Euclidean division, prime factorization and residue-ring
// order bookkeeping in the two imaginary quadratic orders backing the CM
// cases: Z[i] (omega = i, omega^2 = -1) and Z[(1+sqrt(-7))/2]
// (omega^2 = omega - 2). Both are norm-Euclidean with class number one.

#include <array>
#include <vector>

#include "modmath.hpp"

namespace thetadyn {

enum class RingKind { gaussian, kleinian7 };

// a + b*omega with integer coordinates.
struct QuadInt {
    i64 a = 0, b = 0;
    bool operator==(const QuadInt& o) const { return a == o.a && b == o.b; }
    bool operator!=(const QuadInt& o) const { return !(*this == o); }
    bool is_zero() const { return a == 0 && b == 0; }
};

struct RingCtx {
    RingKind kind;

    explicit RingCtx(RingKind k) : kind(k) {}

    QuadInt add(QuadInt x, QuadInt y) const {
        return {checked_i64(i128(x.a) + y.a), checked_i64(i128(x.b) + y.b)};
    }
    QuadInt sub(QuadInt x, QuadInt y) const {
        return {checked_i64(i128(x.a) - y.a), checked_i64(i128(x.b) - y.b)};
    }
    QuadInt neg(QuadInt x) const { return {-x.a, -x.b}; }

    QuadInt mul(QuadInt x, QuadInt y) const {
        i128 ac = i128(x.a) * y.a;
        i128 bd = i128(x.b) * y.b;
        i128 cross = i128(x.a) * y.b + i128(x.b) * y.a;
        if (kind == RingKind::gaussian)
            return {checked_i64(ac - bd, "ring mul"), checked_i64(cross, "ring mul")};
        // omega^2 = omega - 2
        return {checked_i64(ac - 2 * bd, "ring mul"), checked_i64(cross + bd, "ring mul")};
    }

    QuadInt conj(QuadInt x) const {
        if (kind == RingKind::gaussian) return {x.a, -x.b};
        // conj(omega) = 1 - omega
        return {checked_i64(i128(x.a) + x.b), -x.b};
    }

    i64 norm(QuadInt x) const {
        i128 v = kind == RingKind::gaussian
                     ? i128(x.a) * x.a + i128(x.b) * x.b
                     : i128(x.a) * x.a + i128(x.a) * x.b + 2 * i128(x.b) * x.b;
        return checked_i64(v, "ring norm");
    }

    QuadInt from_int(i64 v) const { return {v, 0}; }
    QuadInt omega() const { return {0, 1}; }

    std::vector<QuadInt> units() const {
        if (kind == RingKind::gaussian) return {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        return {{1, 0}, {-1, 0}};
    }
    bool is_unit(QuadInt x) const { return norm(x) == 1; }

    // Canonical representative among unit multiples: minimize (|a|, |b|, a, b).
    QuadInt canonical_associate(QuadInt x) const {
        QuadInt best = x;
        auto key = [](QuadInt v) {
            return std::array<i64, 4>{v.a < 0 ? -v.a : v.a, v.b < 0 ? -v.b : v.b, v.a, v.b};
        };
        for (QuadInt u : units()) {
            QuadInt cand = mul(u, x);
            if (key(cand) < key(best)) best = cand;
        }
        return best;
    }

    bool associates(QuadInt x, QuadInt y) const {
        return canonical_associate(x) == canonical_associate(y);
    }

    // Euclidean division: a = q*b + r with norm(r) < norm(b). The quotient is
    // found by rounding both rational coordinates of a/b to nearest (ties to
    // even); in the sqrt(-7) order the rounded point can land on the norm
    // boundary, so neighbouring quotients are searched when needed.
    std::pair<QuadInt, QuadInt> euclid_divmod(QuadInt x, QuadInt y) const {
        if (y.is_zero()) throw Error(errc::division_by_zero, "euclid_divmod by zero");
        i64 ny = norm(y);
        // x * conj(y) = (num_a + num_b*omega), exact quotient coords num/ny
        QuadInt num = mul(x, conj(y));
        QuadInt q{round_half_even(num.a, ny), round_half_even(num.b, ny)};
        QuadInt r = sub(x, mul(q, y));
        if (norm(r) < ny) return {q, r};
        QuadInt best_q = q, best_r = r;
        i64 best_norm = norm(r);
        for (i64 da = -1; da <= 1; ++da)
            for (i64 db = -1; db <= 1; ++db) {
                QuadInt q2{q.a + da, q.b + db};
                QuadInt r2 = sub(x, mul(q2, y));
                i64 n2 = norm(r2);
                if (n2 < best_norm || (n2 == best_norm && std::array<i64, 2>{q2.a, q2.b} <
                                                              std::array<i64, 2>{best_q.a, best_q.b})) {
                    best_q = q2;
                    best_r = r2;
                    best_norm = n2;
                }
            }
        if (best_norm >= ny) throw Error(errc::internal, "euclidean division failed");
        return {best_q, best_r};
    }

    QuadInt mod(QuadInt x, QuadInt y) const { return euclid_divmod(x, y).second; }

    bool divides(QuadInt d, QuadInt x) const {
        if (d.is_zero()) throw Error(errc::division_by_zero, "divisibility by zero");
        return mod(x, d).is_zero();
    }

    // Exact quotient; throws unless d | x.
    QuadInt exact_div(QuadInt x, QuadInt d) const {
        auto [q, r] = euclid_divmod(x, d);
        if (!r.is_zero()) throw Error(errc::internal, "exact_div: not divisible");
        return q;
    }

    QuadInt gcd(QuadInt x, QuadInt y) const {
        while (!y.is_zero()) {
            QuadInt r = mod(x, y);
            x = y;
            y = r;
        }
        return canonical_associate(x);
    }

    QuadInt pow(QuadInt x, i64 e) const {
        QuadInt r{1, 0}, b = x;
        while (e > 0) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    QuadInt pow_mod(QuadInt x, i64 e, QuadInt m) const {
        QuadInt r = mod({1, 0}, m), b = mod(x, m);
        while (e > 0) {
            if (e & 1) r = mod(mul(r, b), m);
            b = mod(mul(b, b), m);
            e >>= 1;
        }
        return r;
    }

  private:
    // round a/b to nearest integer, ties to even; b > 0
    static i64 round_half_even(i64 a, i64 b) {
        i64 q = a / b, r = a % b;
        if (r < 0) {
            q -= 1;
            r += b;
        }
        // compare 2r with b
        if (2 * r > b) return q + 1;
        if (2 * r < b) return q;
        return (q % 2 == 0) ? q : q + 1;
    }
};

enum class PrimeKind { norm2, inert, split, ramified };

struct QuadFactor {
    QuadInt prime;  // canonical associate
    int exponent = 0;
    PrimeKind kind = PrimeKind::split;
};

struct QuadFactorization {
    QuadInt unit{1, 0};
    std::vector<QuadFactor> factors;  // norm2 first, then inert, split, ramified
};

namespace detail {

inline int extract_prime(const RingCtx& R, QuadInt& work, QuadInt prime) {
    int e = 0;
    while (!work.is_zero() && R.divides(prime, work)) {
        work = R.exact_div(work, prime);
        ++e;
    }
    return e;
}

}  // namespace detail

// Factor x into the canonical shape unit * rho0^{e0} * (inert) * (split) *
// (ramified sqrt(-7)); rho0_hint designates which norm-2 prime comes first.
inline QuadFactorization factor(const RingCtx& R, QuadInt x, QuadInt rho0_hint) {
    if (x.is_zero()) throw Error(errc::zero_element, "factor of zero");
    if (R.norm(rho0_hint) != 2)
        throw Error(errc::factorization_failure, "rho0 hint must have norm 2");

    QuadFactorization out;
    QuadInt work = x;

    QuadFactor head{R.canonical_associate(rho0_hint), 0, PrimeKind::norm2};
    head.exponent = detail::extract_prime(R, work, head.prime);
    out.factors.push_back(head);

    std::vector<QuadFactor> inert, split, ramified;

    if (R.kind == RingKind::kleinian7) {
        // 2 splits: the conjugate norm-2 prime is a genuine split prime here
        QuadInt conj2 = R.canonical_associate(R.conj(rho0_hint));
        int e = detail::extract_prime(R, work, conj2);
        if (e > 0) split.push_back({conj2, e, PrimeKind::split});
    }

    i64 N = R.norm(work);
    for (auto [ell, v] : factorize(N)) {
        if (ell == 2)
            throw Error(errc::factorization_failure, "norm-2 content survived extraction");
        if (R.kind == RingKind::kleinian7 && ell == 7) {
            QuadInt root7 = R.canonical_associate({-1, 2});  // 2*omega - 1, a sqrt of -7
            int e = detail::extract_prime(R, work, root7);
            if (e != v) throw Error(errc::factorization_failure, "ramified extraction mismatch");
            ramified.push_back({root7, e, PrimeKind::ramified});
            continue;
        }
        i64 disc_residue = R.kind == RingKind::gaussian ? -1 : -7;
        if (legendre(disc_residue, ell) == -1) {
            if (v % 2) throw Error(errc::factorization_failure, "odd valuation at an inert prime");
            int e = detail::extract_prime(R, work, R.from_int(ell));
            if (e != v / 2) throw Error(errc::factorization_failure, "inert extraction mismatch");
            // inert primes stay positive rational, matching the factorization shape
            inert.push_back({R.from_int(ell), e, PrimeKind::inert});
            continue;
        }
        // split prime: find one factor above ell via a sqrt of the residue
        i64 t = sqrt_mod_prime(mod_reduce(disc_residue, ell), ell);
        QuadInt seed = R.kind == RingKind::gaussian ? QuadInt{t, 1} : QuadInt{t + 1, -2};
        QuadInt pi = R.canonical_associate(R.gcd(R.from_int(ell), seed));
        if (R.norm(pi) != ell) throw Error(errc::factorization_failure, "split gcd failed");
        QuadInt pibar = R.canonical_associate(R.conj(pi));
        int e1 = detail::extract_prime(R, work, pi);
        int e2 = detail::extract_prime(R, work, pibar);
        if (e1 + e2 != v) throw Error(errc::factorization_failure, "split extraction mismatch");
        if (e1 > 0) split.push_back({pi, e1, PrimeKind::split});
        if (e2 > 0) split.push_back({pibar, e2, PrimeKind::split});
    }

    if (!R.is_unit(work)) throw Error(errc::factorization_failure, "non-unit residue after extraction");
    out.unit = work;

    auto by_norm = [&](const QuadFactor& f, const QuadFactor& g) {
        i64 nf = R.norm(f.prime), ng = R.norm(g.prime);
        if (nf != ng) return nf < ng;
        return std::array<i64, 2>{f.prime.a, f.prime.b} < std::array<i64, 2>{g.prime.a, g.prime.b};
    };
    std::sort(inert.begin(), inert.end(), by_norm);
    std::sort(split.begin(), split.end(), by_norm);
    out.factors.insert(out.factors.end(), inert.begin(), inert.end());
    out.factors.insert(out.factors.end(), split.begin(), split.end());
    out.factors.insert(out.factors.end(), ramified.begin(), ramified.end());

    // reassembly must be exact
    QuadInt check = out.unit;
    for (const auto& f : out.factors) check = R.mul(check, R.pow(f.prime, f.exponent));
    if (check != x) throw Error(errc::factorization_failure, "reassembly check failed");
    return out;
}

// Per-component additive-order table: order_counts[h] elements of additive
// order rational^h in R/prime^exponent.
struct ResidueComponent {
    QuadInt prime;
    int exponent = 0;
    PrimeKind kind = PrimeKind::split;
    i64 rational = 0;                // 2, the inert prime, the split norm, or 7
    std::vector<i64> order_counts;   // indexed by h

    int h_max() const { return (int)order_counts.size() - 1; }
};

inline ResidueComponent component_table(const RingCtx& R, QuadInt prime, int exponent,
                                        PrimeKind kind) {
    if (exponent < 0) throw Error(errc::internal, "component exponent must be >= 0");
    ResidueComponent comp;
    comp.prime = prime;
    comp.exponent = exponent;
    comp.kind = kind;
    switch (kind) {
        case PrimeKind::norm2: {
            comp.rational = 2;
            comp.order_counts.resize(exponent + 1);
            comp.order_counts[0] = 1;
            for (int h = 1; h <= exponent; ++h) comp.order_counts[h] = i64(1) << (h - 1);  // phi(2^h)
            break;
        }
        case PrimeKind::inert: {
            comp.rational = prime.a < 0 ? -prime.a : prime.a;
            comp.order_counts.resize(exponent + 1);
            comp.order_counts[0] = 1;
            i64 ppow = 1;
            for (int h = 1; h <= exponent; ++h) {
                i64 sq_prev = checked_i64(i128(ppow) * ppow);
                ppow *= comp.rational;
                i64 sq = checked_i64(i128(ppow) * ppow);
                comp.order_counts[h] = sq - sq_prev;  // p^{2h} - p^{2(h-1)}
            }
            break;
        }
        case PrimeKind::split: {
            comp.rational = R.norm(prime);
            comp.order_counts.resize(exponent + 1);
            comp.order_counts[0] = 1;
            i64 ppow = 1;
            for (int h = 1; h <= exponent; ++h) {
                comp.order_counts[h] = ppow * (comp.rational - 1);  // phi(p^h)
                ppow *= comp.rational;
            }
            break;
        }
        case PrimeKind::ramified: {
            comp.rational = 7;
            int hmax = (exponent + 1) / 2;  // ceil(e_f / 2)
            comp.order_counts.resize(hmax + 1);
            comp.order_counts[0] = 1;
            for (int h = 1; h <= hmax; ++h) {
                if (exponent % 2 == 1 && h == hmax) {
                    // odd e_f top level: 7^{e_f} - 7^{e_f - 1}
                    i64 top = 1;
                    for (int i = 0; i < exponent - 1; ++i) top *= 7;
                    comp.order_counts[h] = top * 6;
                } else {
                    i64 sq = 1;
                    for (int i = 0; i < 2 * (h - 1); ++i) sq *= 7;
                    comp.order_counts[h] = sq * 48;  // 7^{2h} - 7^{2(h-1)}
                }
            }
            break;
        }
    }
    // row sum must equal the component's norm
    i64 total = 0;
    for (i64 c : comp.order_counts) total = checked_i64(i128(total) + c);
    i64 expect = 1;
    for (int i = 0; i < exponent; ++i)
        expect = checked_i64(i128(expect) * (kind == PrimeKind::inert
                                                 ? comp.rational * comp.rational
                                                 : comp.rational));
    if (total != expect) throw Error(errc::internal, "component table row sum mismatch");
    return comp;
}

// Smallest l such that rho0^l is congruent to a single global sign modulo
// every given prime power: per modulus, the least s with
// m | rho0^s - 1 or m | rho0^s + 1; combined l' = lcm, doubled when no
// uniform sign works at l'.
inline i64 cycle_length_for_moduli(const RingCtx& R, QuadInt rho0,
                                   const std::vector<QuadInt>& moduli) {
    i64 lcm_all = 1;
    for (const auto& m : moduli) {
        QuadInt t = R.mod(rho0, m);
        i64 bound = R.norm(m) + 1;
        i64 li = 0;
        QuadInt acc = t;
        for (i64 s = 1; s <= bound; ++s) {
            if (R.divides(m, R.sub(acc, {1, 0})) || R.divides(m, R.add(acc, {1, 0}))) {
                li = s;
                break;
            }
            acc = R.mod(R.mul(acc, t), m);
        }
        if (li == 0) throw Error(errc::internal, "cycle length: no sign match found");
        lcm_all = std::lcm(lcm_all, li);
    }
    if (moduli.empty()) return 1;

    bool all_minus = true, all_plus = true;  // rho0^{l'} = 1 resp. -1 everywhere
    for (const auto& m : moduli) {
        QuadInt t = R.pow_mod(rho0, lcm_all, m);
        if (!R.divides(m, R.sub(t, {1, 0}))) all_minus = false;
        if (!R.divides(m, R.add(t, {1, 0}))) all_plus = false;
    }
    return (all_minus || all_plus) ? lcm_all : 2 * lcm_all;
}

// The same, keyed by an additive-order vector over residue components.
inline i64 cycle_length_for_h(const RingCtx& R, QuadInt rho0,
                              const std::vector<ResidueComponent>& comps,
                              const std::vector<int>& h) {
    if (comps.size() != h.size())
        throw Error(errc::internal, "cycle_length_for_h: rank mismatch");
    if (!h.empty() && h[0] != 0)
        throw Error(errc::internal, "cycle_length_for_h: norm-2 coordinate must be 0");
    std::vector<QuadInt> moduli;
    for (size_t i = 0; i < comps.size(); ++i) {
        if (h[i] == 0) continue;
        if (h[i] > comps[i].h_max())
            throw Error(errc::internal, "cycle_length_for_h: h out of range");
        moduli.push_back(R.pow(comps[i].prime, h[i]));
    }
    return cycle_length_for_moduli(R, rho0, moduli);
}

}  // namespace thetadyn

#endif
