#include "ecbsd/point_count.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>
#include <unordered_map>

namespace ecbsd {

namespace {

// residue-table chi: mark the squares of F_p once, then read off chi(rhs)
u64 count_with_table(const CurveFp& c) {
    const u64 p = c.p;
    std::vector<std::uint8_t> is_square(p, 0);
    for (u64 x = 0; x <= p / 2; ++x) is_square[mulmod(x, x, p)] = 1;
    u64 n = 1 + p;        // infinity plus one per x
    i64 chi_sum = 0;
    for (u64 x = 0; x < p; ++x) {
        u64 x2 = mulmod(x, x, p);
        u64 rhs = submod(mulmod(x2, x, p), addmod(mulmod(c.a, x, p), c.b, p), p);
        if (rhs != 0) chi_sum += is_square[rhs] ? 1 : -1;
    }
    return n + chi_sum;
}

u64 count_with_legendre(const CurveFp& c) {
    const u64 p = c.p;
    u64 n = 1 + p;
    i64 chi_sum = 0;
    for (u64 x = 0; x < p; ++x) {
        u64 x2 = mulmod(x, x, p);
        u64 rhs = submod(mulmod(x2, x, p), addmod(mulmod(c.a, x, p), c.b, p), p);
        chi_sum += legendre(rhs, p);
    }
    return n + chi_sum;
}

u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

PointFp random_point(const CurveFp& c, std::mt19937_64& rng) {
    std::uniform_int_distribution<u64> dist(0, c.p - 1);
    while (true) {
        u64 x = dist(rng);
        u64 x2 = mulmod(x, x, c.p);
        u64 rhs = submod(mulmod(x2, x, c.p), addmod(mulmod(c.a, x, c.p), c.b, c.p), c.p);
        if (auto y = sqrt_mod(rhs, c.p)) return PointFp::affine(x, *y);
    }
}

// all k in [lo, hi] with k*P = O, via one baby-step/giant-step sweep
std::vector<u64> annihilators_in_range(const CurveFp& c, const PointFp& P, u64 lo, u64 hi) {
    const u64 width = hi - lo;
    const u64 bs = isqrt_u64(width) + 1;

    std::unordered_map<u64, u64> baby;   // encode(j*P) -> smallest j
    baby.reserve(bs * 2);
    auto encode = [&](const PointFp& Q) {
        return Q.inf ? u64(-1) : Q.x * c.p + Q.y;
    };
    PointFp jp = PointFp::infinity();
    for (u64 j = 0; j < bs; ++j) {
        baby.emplace(encode(jp), j);
        jp = detail::add_unchecked(c, jp, P);
    }

    // (lo + i*bs)P == -(jP)  <=>  (lo + i*bs + j)P == O
    std::vector<u64> hits;
    PointFp giant = detail::mul_unchecked(c, lo, P);
    PointFp step = detail::mul_unchecked(c, bs, P);
    for (u64 i = 0;; ++i) {
        PointFp target = point_neg(c, giant);
        auto it = baby.find(encode(target));
        if (it != baby.end()) {
            u64 k = lo + i * bs + it->second;
            if (k >= lo && k <= hi) hits.push_back(k);
        }
        if (lo + i * bs > hi) break;
        giant = detail::add_unchecked(c, giant, step);
    }
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    return hits;
}

// exact order of P given some annihilating multiple m
u64 exact_order(const CurveFp& c, const PointFp& P, u64 m) {
    for (u64 q : prime_factors(m)) {
        while (m % q == 0 && detail::mul_unchecked(c, m / q, P).inf) m /= q;
    }
    return m;
}

} // namespace

u64 count_points_naive(const CurveFp& c, NaiveMethod method) {
    if (c.p > kNaiveMaxP)
        throw refusal_error("count_points_naive: p=" + std::to_string(c.p) +
                            " exceeds the enumeration budget (use BSGS)");
    switch (method) {
        case NaiveMethod::ResidueTable: return count_with_table(c);
        case NaiveMethod::LegendreSymbol: return count_with_legendre(c);
        case NaiveMethod::Auto:
        default:
            return c.p <= kResidueTableCap ? count_with_table(c) : count_with_legendre(c);
    }
}

std::optional<u64> count_points_bsgs(const CurveFp& c) {
    if (c.p < kBsgsMinP)
        throw refusal_error("count_points_bsgs: p=" + std::to_string(c.p) +
                            " is below the method threshold (p > 229)");
    const u64 p = c.p;
    const u64 w = isqrt_u64(4 * p);            // floor(2 sqrt p)
    const u64 lo = p + 1 - w, hi = p + 1 + w;

    std::mt19937_64 rng(splitmix64(p) ^ splitmix64(c.a * 0x10001 + c.b));
    u64 lcm = 1;
    for (int attempt = 0; attempt < 40; ++attempt) {
        PointFp P = random_point(c, rng);
        auto hits = annihilators_in_range(c, P, lo, hi);
        if (hits.empty())
            throw internal_error("BSGS found no group-order multiple in the Hasse interval");
        u64 ord = exact_order(c, P, hits.front());
        lcm = lcm / gcd_u64(lcm, ord) * ord;
        u64 count = hi / lcm - (lo - 1) / lcm;
        if (count == 0)
            throw internal_error("BSGS: no multiple of the point-order lcm in the Hasse interval");
        if (count == 1) return (lo + lcm - 1) / lcm * lcm;
    }
    return std::nullopt;   // ambiguous; caller may use the naive count
}

i64 trace_ap(const CurveFp& c) {
    u64 n;
    if (c.p < kBsgsThreshold) {
        n = count_points_naive(c);
    } else {
        auto bs = count_points_bsgs(c);
        if (bs) {
            n = *bs;
        } else if (c.p <= kNaiveMaxP) {
            n = count_points_naive(c);
        } else {
            throw refusal_error("trace_ap: BSGS ambiguous and p exceeds the naive budget");
        }
    }
    i64 a = static_cast<i64>(c.p) + 1 - static_cast<i64>(n);
    if (i128(a) * a > i128(4) * c.p)
        throw internal_error("Hasse bound violated at p=" + std::to_string(c.p) +
                             " (a_p=" + std::to_string(a) + "): counting bug");
    return a;
}

LocalData local_data(const CurveQ& c, u64 p, int M) {
    LocalData d;
    d.p = p;
    auto cp = reduce_mod_p(c, p);
    if (!cp) {
        d.good = false;
        return d;
    }
    d.good = true;
    d.a_p = trace_ap(*cp);
    d.n_p = p + 1 - d.a_p;
    d.traces.reserve(M);
    i64 t0 = 2, t1 = d.a_p;
    for (int m = 1; m <= M; ++m) {
        d.traces.push_back(t1);
        i64 t2 = d.a_p * t1 - static_cast<i64>(p) * t0;
        t0 = t1;
        t1 = t2;
    }
    return d;
}

i64 npm_from_ap(const LocalData& d, int m) {
    if (!d.good) throw usage_error("npm_from_ap requires good reduction");
    if (m < 1) throw usage_error("npm_from_ap requires m >= 1");
    i128 t0 = 2, t1 = d.a_p, pm = 1;
    for (int i = 0; i < m; ++i) pm *= d.p;
    for (int i = 1; i < m; ++i) {
        i128 t2 = i128(d.a_p) * t1 - i128(d.p) * t0;
        t0 = t1;
        t1 = t2;
    }
    i128 n = pm + 1 - t1;
    if (n > i128(INT64_MAX)) throw refusal_error("npm_from_ap: p^m overflows the count type");
    return static_cast<i64>(n);
}

ExtField make_ext_field(u64 p, int m) {
    if (m < 1 || m > 3) throw usage_error("extension degree must be 1, 2 or 3");
    ExtField f{p, m, std::vector<u64>(m, 0)};
    if (m == 1) return f;    // t itself; the field is F_p
    // smallest (c_{m-1},...,c_0) in base-p order with no root in F_p;
    // for degree 2 and 3 root-freeness is irreducibility
    u64 total = 1;
    for (int i = 0; i < m; ++i) total *= p;
    for (u64 k = 0; k < total; ++k) {
        u64 kk = k;
        for (int i = 0; i < m; ++i) { f.modulus[i] = kk % p; kk /= p; }
        bool has_root = false;
        for (u64 t = 0; t < p && !has_root; ++t) {
            u64 v = 1;
            for (int i = m - 1; i >= 0; --i) v = addmod(mulmod(v, t, p), f.modulus[i], p);
            has_root = v == 0;
        }
        if (!has_root) return f;
    }
    throw internal_error("no irreducible polynomial found (unreachable)");
}

namespace {

// fixed-degree F_{p^m} element ops on coefficient arrays of length m <= 3
struct ExtOps {
    const ExtField& f;
    int m;
    u64 p;

    explicit ExtOps(const ExtField& field) : f(field), m(field.m), p(field.p) {}

    void mul(const u64* a, const u64* b, u64* out) const {
        u64 prod[5] = {0, 0, 0, 0, 0};
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                prod[i + j] = (prod[i + j] + u128(a[i]) * b[j]) % p;
        for (int i = 2 * m - 2; i >= m; --i) {
            u64 c = prod[i];
            if (!c) continue;
            prod[i] = 0;
            for (int j = 0; j < m; ++j)
                prod[i - m + j] = submod(prod[i - m + j], mulmod(c, f.modulus[j], p), p);
        }
        for (int i = 0; i < m; ++i) out[i] = prod[i];
    }

    u64 encode(const u64* a) const {
        u64 k = 0;
        for (int i = m - 1; i >= 0; --i) k = k * p + a[i];
        return k;
    }

    void decode(u64 k, u64* a) const {
        for (int i = 0; i < m; ++i) { a[i] = k % p; k /= p; }
    }
};

} // namespace

u64 count_points_ext(const CurveFp& c, int m) {
    u64 q = 1;
    for (int i = 0; i < m; ++i) {
        q *= c.p;
        if (q > kExtMaxQ)
            throw refusal_error("count_points_ext: p^m exceeds the enumeration budget");
    }
    if (m == 1) return count_points_naive(c);

    ExtField field = make_ext_field(c.p, m);
    ExtOps ops(field);

    // tally[e] = number of y with y^2 = decode(e)
    std::vector<std::uint8_t> tally(q, 0);
    u64 y[3], y2[3];
    for (u64 k = 0; k < q; ++k) {
        ops.decode(k, y);
        ops.mul(y, y, y2);
        ++tally[ops.encode(y2)];
    }

    u64 n = 1;
    u64 x[3], x2[3], rhs[3];
    const u64 a0 = c.a, b0 = c.b;
    for (u64 k = 0; k < q; ++k) {
        ops.decode(k, x);
        ops.mul(x, x, x2);
        ops.mul(x2, x, rhs);                       // x^3
        for (int i = 0; i < m; ++i) rhs[i] = submod(rhs[i], mulmod(a0, x[i], c.p), c.p);
        rhs[0] = submod(rhs[0], b0, c.p);
        n += tally[ops.encode(rhs)];
    }
    return n;
}

std::vector<LocalData> local_data_batch(const CurveQ& c, const std::vector<u64>& primes, int M) {
    std::vector<LocalData> out(primes.size());
    unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 8);
    if (workers <= 1 || primes.size() < 16) {
        for (size_t i = 0; i < primes.size(); ++i) out[i] = local_data(c, primes[i], M);
        return out;
    }
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i = next.fetch_add(1); i < primes.size(); i = next.fetch_add(1))
            out[i] = local_data(c, primes[i], M);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    return out;
}

} // namespace ecbsd
