#ifndef ECBSD_MODMATH_HPP
#define ECBSD_MODMATH_HPP

// 64-bit modular arithmetic, deterministic primality, sieves and modular
// square roots. Everything here is plain machine arithmetic; __int128 keeps
// products exact for moduli up to 2^63.

#include <cstdint>
#include <optional>
#include <vector>

namespace ecbsd {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

inline u64 addmod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    if (s >= m || s < a) s -= m;
    return s;
}

inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }

u64 powmod(u64 base, u64 exp, u64 m);
u64 invmod(u64 a, u64 m);                 // m prime (or gcd(a,m)=1)
u64 isqrt_u64(u64 n);                     // floor(sqrt(n))

bool is_prime(u64 n);                     // deterministic Miller-Rabin
int legendre(u64 a, u64 p);               // quadratic character, chi(0) = 0
std::optional<u64> sqrt_mod(u64 a, u64 p);// Tonelli-Shanks, p odd prime

std::vector<u64> primes_up_to(u64 n);
std::vector<std::int8_t> mobius_up_to(u64 n);

u64 gcd_u64(u64 a, u64 b);
std::vector<u64> prime_factors(u64 n);    // distinct primes (trial + Pollard rho)

} // namespace ecbsd

#endif
