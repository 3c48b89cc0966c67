#ifndef THETADYN_MODMATH_HPP
#define THETADYN_MODMATH_HPP

// Plain-integer modular arithmetic helpers shared by the field, ring and
// curve layers. Everything here works on int64 values at desk scale
// (moduli below ~2^31, products guarded through __int128).

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace thetadyn {

using i64 = long long;
using i128 = __int128;

enum class errc {
    not_prime,
    even_characteristic,
    reducible_modulus,
    zero_element,
    not_a_square,
    domain_too_large,
    division_by_zero,
    point_not_on_curve,
    wrong_residue_class,
    no_match,
    k_not_in_case,
    k_zero,
    periodic_input,
    invalid_case,
    not_in_ring,
    factorization_failure,
    overflow,
    internal,
};

class Error : public std::runtime_error {
  public:
    errc code;
    Error(errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline i64 checked_i64(i128 v, const char* what = "integer arithmetic") {
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
        throw Error(errc::overflow, std::string(what) + ": value exceeds 64-bit range");
    return static_cast<i64>(v);
}

inline i64 mod_reduce(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mod_mul(i64 a, i64 b, i64 m) { return static_cast<i64>(i128(a) * b % m); }

inline i64 mod_pow(i64 base, i64 exp, i64 m) {
    if (m <= 0) throw Error(errc::division_by_zero, "mod_pow: nonpositive modulus");
    i64 r = 1 % m;
    base = mod_reduce(base, m);
    while (exp > 0) {
        if (exp & 1) r = mod_mul(r, base, m);
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    return r;
}

inline i64 mod_inverse(i64 a, i64 m) {
    a = mod_reduce(a, m);
    if (a == 0) throw Error(errc::division_by_zero, "mod_inverse of zero");
    i64 old_r = a, r = m, old_s = 1, s = 0;
    while (r != 0) {
        i64 q = old_r / r;
        old_r = std::exchange(r, old_r - q * r);
        old_s = std::exchange(s, old_s - q * s);
    }
    if (old_r != 1) throw Error(errc::division_by_zero, "mod_inverse: not coprime");
    return mod_reduce(old_s, m);
}

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL}) {
        if (n == d) return true;
        if (n % d == 0) return false;
    }
    for (i64 d = 17; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

// Trial-division factorization, adequate for the mandated desk scale.
inline std::vector<std::pair<i64, int>> factorize(i64 n) {
    if (n < 1) throw Error(errc::internal, "factorize: nonpositive input");
    std::vector<std::pair<i64, int>> out;
    for (i64 d = 2; d * d <= n; d == 2 ? d = 3 : d += 2) {
        if (n % d) continue;
        int e = 0;
        while (n % d == 0) n /= d, ++e;
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline std::vector<i64> divisors_of(i64 n) {
    std::vector<i64> divs{1};
    for (auto [prime, mult] : factorize(n)) {
        size_t sz = divs.size();
        i64 pw = 1;
        for (int e = 1; e <= mult; ++e) {
            pw *= prime;
            for (size_t i = 0; i < sz; ++i) divs.push_back(divs[i] * pw);
        }
    }
    return divs;
}

inline i64 euler_phi(i64 n) {
    i64 r = n;
    for (auto [prime, mult] : factorize(n)) {
        (void)mult;
        r -= r / prime;
    }
    return r;
}

// (odd part, power-of-two exponent) with n = odd * 2^e.
inline std::pair<i64, int> split_order(i64 n) {
    if (n < 1) throw Error(errc::internal, "split_order: nonpositive input");
    int e = 0;
    while ((n & 1) == 0) n >>= 1, ++e;
    return {n, e};
}

// Legendre symbol via Euler's criterion; p an odd prime.
inline int legendre(i64 a, i64 p) {
    a = mod_reduce(a, p);
    if (a == 0) return 0;
    i64 t = mod_pow(a, (p - 1) / 2, p);
    return t == 1 ? 1 : -1;
}

// Tonelli-Shanks square root mod an odd prime. Throws when a is a non-residue.
inline i64 sqrt_mod_prime(i64 a, i64 p) {
    a = mod_reduce(a, p);
    if (a == 0) return 0;
    if (legendre(a, p) != 1) throw Error(errc::not_a_square, "sqrt_mod_prime: non-residue");
    if (p % 4 == 3) return mod_pow(a, (p + 1) / 4, p);
    auto [q, s] = split_order(p - 1);
    i64 z = 2;
    while (legendre(z, p) != -1) ++z;
    i64 m = s;
    i64 c = mod_pow(z, q, p);
    i64 t = mod_pow(a, q, p);
    i64 r = mod_pow(a, (q + 1) / 2, p);
    while (t != 1) {
        i64 t2 = t;
        i64 i = 0;
        while (t2 != 1) {
            t2 = mod_mul(t2, t2, p);
            ++i;
        }
        i64 b = mod_pow(c, i64(1) << (m - i - 1), p);
        m = i;
        c = mod_mul(b, b, p);
        t = mod_mul(t, c, p);
        r = mod_mul(r, b, p);
    }
    return r;
}

// Multiplicative order of a modulo m (gcd(a, m) must be 1).
inline i64 mult_order_mod(i64 a, i64 m) {
    if (m == 1) return 1;
    a = mod_reduce(a, m);
    if (std::gcd(a, m) != 1) throw Error(errc::internal, "mult_order_mod: not a unit");
    i64 order = euler_phi(m);
    for (auto [prime, mult] : factorize(order)) {
        (void)mult;
        while (order % prime == 0 && mod_pow(a, order / prime, m) == 1) order /= prime;
    }
    return order;
}

inline std::vector<i64> primes_in_range(i64 lo, i64 hi) {
    std::vector<i64> out;
    for (i64 v = std::max<i64>(2, lo); v <= hi; ++v)
        if (is_prime(v)) out.push_back(v);
    return out;
}

}  // namespace thetadyn

#endif
