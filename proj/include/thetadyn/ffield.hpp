#ifndef THETADYN_FFIELD_HPP
#define THETADYN_FFIELD_HPP

// Exact arithmetic in F_p and F_{p^n} at desk scale (q bounded by a
// configurable limit, 2^20 by default). A context carries the defining
// modulus, a multiplicative generator and full power/dlog tables, so
// inversion, square roots and discrete-log labels are table lookups.
// Contexts are immutable after construction and safe to share across threads.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "modmath.hpp"

namespace thetadyn {

inline constexpr i64 kDefaultDomainLimit = i64(1) << 20;

// Element of F_{p^n}: little-endian coefficient vector of length n,
// every coefficient reduced into [0, p).
struct FieldElem {
    std::vector<i64> c;

    bool operator==(const FieldElem& o) const { return c == o.c; }
    bool operator!=(const FieldElem& o) const { return c != o.c; }
    // Lexicographic on the coefficient list, c[0] most significant.
    bool operator<(const FieldElem& o) const {
        return std::lexicographical_compare(c.begin(), c.end(), o.c.begin(), o.c.end());
    }
};

class FieldCtx {
  public:
    i64 p = 0;
    i64 n = 0;
    i64 q = 0;                 // p^n
    std::vector<i64> modulus;  // n+1 coefficients, monic, irreducible over F_p
    FieldElem generator;       // smallest (lex coefficient order) element of order q-1
    std::vector<std::pair<i64, int>> qm1_factors;

    static FieldCtx build(i64 p, i64 n, std::optional<std::vector<i64>> mod_coeffs = std::nullopt,
                          i64 domain_limit = kDefaultDomainLimit) {
        if (p == 2) throw Error(errc::even_characteristic, "characteristic 2 is out of scope");
        if (!is_prime(p) || p < 2)
            throw Error(errc::not_prime, "p = " + std::to_string(p) + " is not prime");
        if (n < 1) throw Error(errc::internal, "extension degree must be positive");

        FieldCtx F;
        F.p = p;
        F.n = n;
        i128 qq = 1;
        for (i64 i = 0; i < n; ++i) {
            qq *= p;
            if (qq > domain_limit)
                throw Error(errc::domain_too_large,
                            "field size exceeds limit " + std::to_string(domain_limit));
        }
        F.q = static_cast<i64>(qq);
        F.qm1_factors = factorize(F.q - 1);

        if (mod_coeffs) {
            auto m = *mod_coeffs;
            if ((i64)m.size() != n + 1)
                throw Error(errc::reducible_modulus, "modulus must have degree n");
            for (auto& coef : m) coef = mod_reduce(coef, p);
            if (m.back() != 1) throw Error(errc::reducible_modulus, "modulus must be monic");
            if (!poly_irreducible(m, p))
                throw Error(errc::reducible_modulus, "supplied modulus is reducible");
            F.modulus = m;
        } else {
            F.modulus = smallest_irreducible(p, n);
        }

        F.find_generator();
        F.build_tables();
        return F;
    }

    // ---- element construction ----

    FieldElem zero() const { return FieldElem{std::vector<i64>(n, 0)}; }
    FieldElem one() const { return from_int(1); }

    FieldElem from_int(i64 v) const {
        FieldElem e = zero();
        e.c[0] = mod_reduce(v, p);
        return e;
    }

    FieldElem from_coeffs(std::vector<i64> coeffs) const {
        for (auto& v : coeffs) v = mod_reduce(v, p);
        if ((i64)coeffs.size() > n) coeffs = poly_mod(std::move(coeffs), modulus, p);
        coeffs.resize(n, 0);
        return FieldElem{std::move(coeffs)};
    }

    bool is_zero(const FieldElem& x) const {
        for (i64 v : x.c)
            if (v) return false;
        return true;
    }

    // Dense integer code in [0, q): sum of c[i] * p^i. Node enumeration and
    // table indexing both use this order.
    i64 code(const FieldElem& x) const {
        i64 v = 0;
        for (i64 i = n - 1; i >= 0; --i) v = v * p + x.c[i];
        return v;
    }

    FieldElem elem_from_code(i64 code) const {
        FieldElem e = zero();
        for (i64 i = 0; i < n; ++i) {
            e.c[i] = code % p;
            code /= p;
        }
        return e;
    }

    // ---- arithmetic ----

    FieldElem add(const FieldElem& x, const FieldElem& y) const {
        FieldElem r = x;
        for (i64 i = 0; i < n; ++i) {
            r.c[i] += y.c[i];
            if (r.c[i] >= p) r.c[i] -= p;
        }
        return r;
    }

    FieldElem sub(const FieldElem& x, const FieldElem& y) const {
        FieldElem r = x;
        for (i64 i = 0; i < n; ++i) {
            r.c[i] -= y.c[i];
            if (r.c[i] < 0) r.c[i] += p;
        }
        return r;
    }

    FieldElem neg(const FieldElem& x) const { return sub(zero(), x); }

    FieldElem scalar_mul(i64 k, const FieldElem& x) const {
        k = mod_reduce(k, p);
        FieldElem r = x;
        for (i64 i = 0; i < n; ++i) r.c[i] = mod_mul(r.c[i], k, p);
        return r;
    }

    FieldElem mul(const FieldElem& x, const FieldElem& y) const {
        return FieldElem{poly_mulmod(x.c, y.c, modulus, p)};
    }

    FieldElem pow(const FieldElem& x, i64 e) const {
        if (e < 0) throw Error(errc::internal, "pow: negative exponent");
        FieldElem r = one(), b = x;
        while (e > 0) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    FieldElem inv(const FieldElem& x) const {
        if (is_zero(x)) throw Error(errc::division_by_zero, "field inverse of zero");
        i64 l = dlog_of_code_[code(x)];
        return elem_from_code(code_of_power_[l == 0 ? 0 : q - 1 - l]);
    }

    FieldElem div(const FieldElem& x, const FieldElem& y) const { return mul(x, inv(y)); }

    // ---- order / square structure ----

    // Smallest t >= 1 with x^t = 1, by descending exponents of q-1.
    i64 mul_order(const FieldElem& x) const {
        if (is_zero(x)) throw Error(errc::zero_element, "mul_order of zero");
        i64 order = q - 1;
        for (auto [prime, mult] : qm1_factors) {
            (void)mult;
            while (order % prime == 0 && pow(x, order / prime) == one()) order /= prime;
        }
        return order;
    }

    // Euler criterion x^((q-1)/2); zero counts as a square.
    bool is_square(const FieldElem& x) const {
        if (is_zero(x)) return true;
        return pow(x, (q - 1) / 2) == one();
    }

    // Both square roots (y, -y), the lexicographically smaller first.
    std::pair<FieldElem, FieldElem> sqrt(const FieldElem& x) const {
        if (is_zero(x)) return {zero(), zero()};
        i64 l = dlog_of_code_[code(x)];
        if (l & 1) throw Error(errc::not_a_square, "sqrt: non-square element");
        FieldElem r = elem_from_code(code_of_power_[l / 2]);
        FieldElem s = neg(r);
        if (s < r) std::swap(r, s);
        return {r, s};
    }

    // Exponent i in [0, q-1) with generator^i = x.
    i64 dlog(const FieldElem& x) const {
        if (is_zero(x)) throw Error(errc::zero_element, "dlog of the zero element");
        return dlog_of_code_[code(x)];
    }

    FieldElem power_of_generator(i64 e) const {
        return elem_from_code(code_of_power_[mod_reduce(e, q - 1)]);
    }

  private:
    std::vector<int32_t> dlog_of_code_;   // code -> exponent, -1 for zero
    std::vector<int32_t> code_of_power_;  // exponent -> code

    // ---- raw polynomial arithmetic over F_p (construction-time only) ----

    static std::vector<i64> poly_trim(std::vector<i64> a) {
        while (!a.empty() && a.back() == 0) a.pop_back();
        return a;
    }

    static std::vector<i64> poly_mulmod(const std::vector<i64>& a, const std::vector<i64>& b,
                                        const std::vector<i64>& mod, i64 p) {
        i64 n = (i64)mod.size() - 1;
        std::vector<i64> prod(2 * n - 1, 0);
        for (size_t i = 0; i < a.size(); ++i) {
            if (!a[i]) continue;
            for (size_t j = 0; j < b.size(); ++j)
                if (b[j]) prod[i + j] = (prod[i + j] + i128(a[i]) * b[j]) % p;
        }
        // reduce by the monic modulus
        for (i64 d = 2 * n - 2; d >= n; --d) {
            i64 lead = prod[d];
            if (!lead) continue;
            prod[d] = 0;
            for (i64 i = 0; i < n; ++i) {
                if (!mod[i]) continue;
                i64 idx = d - n + i;
                prod[idx] = mod_reduce(prod[idx] - mod_mul(lead, mod[i], p), p);
            }
        }
        prod.resize(n);
        return prod;
    }

    static std::vector<i64> poly_mod(std::vector<i64> a, const std::vector<i64>& m, i64 p) {
        a = poly_trim(std::move(a));
        auto mm = poly_trim(m);
        i64 dm = (i64)mm.size() - 1;
        i64 lead_inv = mod_inverse(mm.back(), p);
        while ((i64)a.size() - 1 >= dm && !a.empty()) {
            i64 d = (i64)a.size() - 1;
            i64 f = mod_mul(a.back(), lead_inv, p);
            for (i64 i = 0; i <= dm; ++i)
                a[d - dm + i] = mod_reduce(a[d - dm + i] - mod_mul(f, mm[i], p), p);
            a = poly_trim(std::move(a));
        }
        return a;
    }

    static std::vector<i64> poly_gcd(std::vector<i64> a, std::vector<i64> b, i64 p) {
        a = poly_trim(std::move(a));
        b = poly_trim(std::move(b));
        while (!b.empty()) {
            auto r = poly_mod(a, b, p);
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    // Irreducibility of a monic degree-n polynomial: no irreducible factor of
    // degree <= n/2, tested via gcd(f, x^{p^i} - x) for 1 <= i <= n/2.
    static bool poly_irreducible(const std::vector<i64>& f, i64 p) {
        i64 n = (i64)f.size() - 1;
        if (n == 1) return true;
        std::vector<i64> x{0, 1};
        std::vector<i64> t = x;  // will hold x^{p^i} mod f
        for (i64 i = 1; i <= n / 2; ++i) {
            // t <- t^p mod f
            std::vector<i64> r{1};
            std::vector<i64> b = t;
            i64 e = p;
            while (e > 0) {
                if (e & 1) r = poly_mulmod(pad(r, n), pad(b, n), f, p);
                b = poly_mulmod(pad(b, n), pad(b, n), f, p);
                e >>= 1;
            }
            t = r;
            std::vector<i64> diff = pad(t, n);
            diff[1] = mod_reduce(diff[1] - 1, p);
            auto g = poly_gcd(f, diff, p);
            if ((i64)poly_trim(g).size() - 1 > 0) return false;
        }
        return true;
    }

    static std::vector<i64> pad(std::vector<i64> a, i64 n) {
        a.resize((size_t)std::max<i64>((i64)a.size(), n), 0);
        return a;
    }

    static std::vector<i64> smallest_irreducible(i64 p, i64 n) {
        if (n == 1) return {0, 1};  // the polynomial x; for F_p any monic linear works
        // scan monic degree-n polynomials in lex order of (c0, ..., c_{n-1})
        std::vector<i64> c(n, 0);
        while (true) {
            std::vector<i64> f = c;
            f.push_back(1);
            if (f[0] != 0 && poly_irreducible(f, p)) return f;
            i64 i = n - 1;
            while (i >= 0 && c[i] == p - 1) c[i--] = 0;
            if (i < 0) throw Error(errc::internal, "no irreducible polynomial found");
            ++c[i];
        }
    }

    void find_generator() {
        // scan elements in lex coefficient order (c0 most significant)
        std::vector<i64> c(n, 0);
        while (true) {
            i64 i = n - 1;
            while (i >= 0 && c[i] == p - 1) c[i--] = 0;
            if (i < 0) throw Error(errc::internal, "no generator found");
            ++c[i];
            FieldElem cand{c};
            if (order_is_full(cand)) {
                generator = cand;
                return;
            }
        }
    }

    bool order_is_full(const FieldElem& x) const {
        for (auto [prime, mult] : qm1_factors) {
            (void)mult;
            FieldElem r{std::vector<i64>(n, 0)};
            r.c[0] = 1;
            FieldElem b = x;
            i64 e = (q - 1) / prime;
            while (e > 0) {
                if (e & 1) r = FieldElem{poly_mulmod(r.c, b.c, modulus, p)};
                b = FieldElem{poly_mulmod(b.c, b.c, modulus, p)};
                e >>= 1;
            }
            bool is_one = r.c[0] == 1;
            for (i64 j = 1; j < n && is_one; ++j) is_one = r.c[j] == 0;
            if (is_one) return false;
        }
        return true;
    }

    void build_tables() {
        dlog_of_code_.assign(q, -1);
        code_of_power_.assign(q - 1, 0);
        FieldElem cur = one();
        for (i64 e = 0; e < q - 1; ++e) {
            i64 cd = code(cur);
            if (dlog_of_code_[cd] != -1)
                throw Error(errc::internal, "generator order check failed while building tables");
            dlog_of_code_[cd] = (int32_t)e;
            code_of_power_[e] = (int32_t)cd;
            cur = FieldElem{poly_mulmod(cur.c, generator.c, modulus, p)};
        }
    }
};

// P^1(F_q) = F_q with a point at infinity adjoined.
struct ProjPoint {
    bool infinite = false;
    FieldElem v;

    static ProjPoint infinity() { return ProjPoint{true, FieldElem{}}; }
    static ProjPoint finite(FieldElem e) { return ProjPoint{false, std::move(e)}; }

    bool operator==(const ProjPoint& o) const {
        if (infinite != o.infinite) return false;
        return infinite || v == o.v;
    }
    bool operator!=(const ProjPoint& o) const { return !(*this == o); }
};

}  // namespace thetadyn

#endif
