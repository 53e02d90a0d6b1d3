#include "ecbsd/curve.hpp"

#include <charconv>
#include <sstream>

namespace ecbsd {

BigInt discriminant(const BigInt& A, const BigInt& B) {
    return 16 * (4 * A * A * A - 27 * B * B);
}

CurveQ::CurveQ(BigInt A, BigInt B) : a_(std::move(A)), b_(std::move(B)) {
    disc_ = ecbsd::discriminant(a_, b_);
    if (disc_ == 0)
        throw usage_error("singular curve: discriminant vanishes for A=" + a_.get_str() +
                          ", B=" + b_.get_str());
}

CurveQ CurveQ::scaled(const BigInt& k) const {
    if (k == 0) throw usage_error("curve scaling factor must be nonzero");
    BigInt k2 = k * k, k4 = k2 * k2;
    return CurveQ(k4 * a_, k4 * k2 * b_);
}

CurveQ CurveQ::parse(std::string_view text) {
    auto comma = text.find(',');
    if (comma == std::string_view::npos)
        throw usage_error("curve must be given as \"A,B\"");
    auto piece = [&](std::string_view s) {
        if (s.empty()) throw usage_error("curve must be given as \"A,B\"");
        try {
            return BigInt(std::string(s));
        } catch (const std::invalid_argument&) {
            throw usage_error("bad integer in curve spec: \"" + std::string(s) + "\"");
        }
    };
    return CurveQ(piece(text.substr(0, comma)), piece(text.substr(comma + 1)));
}

std::string CurveQ::to_string() const {
    return a_.get_str() + "," + b_.get_str();
}

std::optional<CurveFp> reduce_mod_p(const CurveQ& c, u64 p) {
    if (!is_prime(p)) throw usage_error("reduction modulus must be prime, got " + std::to_string(p));
    BigInt pz(static_cast<unsigned long>(p));
    if (mpz_divisible_p(c.discriminant().get_mpz_t(), pz.get_mpz_t()))
        return std::nullopt;
    BigInt a = c.A() % pz, b = c.B() % pz;
    if (a < 0) a += pz;
    if (b < 0) b += pz;
    return CurveFp{p, a.get_ui(), b.get_ui()};
}

bool on_curve(const CurveFp& c, const PointFp& P) {
    if (P.inf) return true;
    if (P.x >= c.p || P.y >= c.p) return false;
    u64 rhs = submod(mulmod(mulmod(P.x, P.x, c.p), P.x, c.p),
                     addmod(mulmod(c.a, P.x, c.p), c.b, c.p), c.p);
    return mulmod(P.y, P.y, c.p) == rhs;
}

PointFp point_neg(const CurveFp& c, const PointFp& P) {
    if (P.inf) return P;
    return PointFp::affine(P.x, P.y ? c.p - P.y : 0);
}

namespace detail {

PointFp add_unchecked(const CurveFp& c, const PointFp& P, const PointFp& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    const u64 p = c.p;
    u64 lambda;
    if (P.x == Q.x) {
        if (addmod(P.y, Q.y, p) == 0) return PointFp::infinity();  // vertical chord
        // tangent: (3x^2 - a) / 2y
        u64 num = submod(mulmod(3 % p, mulmod(P.x, P.x, p), p), c.a % p, p);
        lambda = mulmod(num, invmod(addmod(P.y, P.y, p), p), p);
    } else {
        u64 num = submod(Q.y, P.y, p);
        u64 den = submod(Q.x, P.x, p);
        lambda = mulmod(num, invmod(den, p), p);
    }
    u64 x3 = submod(mulmod(lambda, lambda, p), addmod(P.x, Q.x, p), p);
    u64 y3 = submod(mulmod(lambda, submod(P.x, x3, p), p), P.y, p);
    return PointFp::affine(x3, y3);
}

PointFp mul_unchecked(const CurveFp& c, u64 n, const PointFp& P) {
    PointFp r = PointFp::infinity();
    PointFp base = P;
    while (n) {
        if (n & 1) r = add_unchecked(c, r, base);
        base = add_unchecked(c, base, base);
        n >>= 1;
    }
    return r;
}

} // namespace detail

PointFp point_add(const CurveFp& c, const PointFp& P, const PointFp& Q) {
    if (!on_curve(c, P) || !on_curve(c, Q))
        throw usage_error("point_add: input point not on the curve");
    return detail::add_unchecked(c, P, Q);
}

PointFp point_mul(const CurveFp& c, i64 n, const PointFp& P) {
    if (!on_curve(c, P))
        throw usage_error("point_mul: input point not on the curve");
    if (n == 0 || P.inf) return PointFp::infinity();
    PointFp base = n < 0 ? point_neg(c, P) : P;
    u64 mag = n < 0 ? u64(-(n + 1)) + 1 : u64(n);
    return detail::mul_unchecked(c, mag, base);
}

// --- rational points ---------------------------------------------------------

RationalPoint RationalPoint::infinity() { return RationalPoint(); }

RationalPoint RationalPoint::from_uvd(const CurveQ& c, BigInt u, BigInt v, BigInt d) {
    if (d < 1) throw usage_error("rational point denominator must be >= 1");
    RationalPoint P;
    P.inf_ = false;
    P.u_ = std::move(u);
    P.v_ = std::move(v);
    P.d_ = std::move(d);
    if (gcd(P.u_, P.d_) != 1 || gcd(P.v_, P.d_) != 1) {
        // not in lowest terms; re-canonicalize through the affine coordinates
        BigRat x(P.u_), y(P.v_);
        x /= BigRat(P.d_ * P.d_);
        y /= BigRat(P.d_ * P.d_ * P.d_);
        x.canonicalize();
        y.canonicalize();
        return from_xy(c, x, y);
    }
    if (!on_curve(c, P))
        throw usage_error("rational point (" + P.u_.get_str() + "," + P.v_.get_str() + "," +
                          P.d_.get_str() + ") is not on the curve");
    return P;
}

RationalPoint RationalPoint::from_xy(const CurveQ& c, const BigRat& x, const BigRat& y) {
    // denominators of affine points on an integral model are (d^2, d^3)
    BigInt dx = x.get_den();
    BigInt d = sqrt(dx);
    if (d * d != dx)
        throw usage_error("rational point x-denominator is not a square");
    BigInt d3 = d * d * d;
    if (!mpz_divisible_p(d3.get_mpz_t(), y.get_den().get_mpz_t()))
        throw usage_error("rational point y-denominator does not match x-denominator");
    RationalPoint P;
    P.inf_ = false;
    P.u_ = x.get_num();
    P.v_ = y.get_num() * (d3 / y.get_den());
    P.d_ = d;
    if (!on_curve(c, P))
        throw usage_error("rational point " + x.get_str() + "," + y.get_str() +
                          " is not on the curve");
    return P;
}

BigRat RationalPoint::x() const {
    BigRat r(u_, d_ * d_);
    r.canonicalize();
    return r;
}

BigRat RationalPoint::y() const {
    BigRat r(v_, d_ * d_ * d_);
    r.canonicalize();
    return r;
}

std::string RationalPoint::to_string() const {
    if (inf_) return "inf";
    return x().get_str() + "," + y().get_str();
}

bool RationalPoint::operator==(const RationalPoint& o) const {
    if (inf_ != o.inf_) return false;
    if (inf_) return true;
    return u_ == o.u_ && v_ == o.v_ && d_ == o.d_;
}

bool on_curve(const CurveQ& c, const RationalPoint& P) {
    if (P.is_infinity()) return true;
    const BigInt &u = P.u(), &v = P.v(), &d = P.d();
    BigInt d2 = d * d;
    BigInt d4 = d2 * d2;
    return v * v == u * u * u - c.A() * u * d4 - c.B() * d4 * d2;
}

RationalPoint rat_neg(const CurveQ& c, const RationalPoint& P) {
    if (P.is_infinity()) return P;
    return RationalPoint::from_uvd(c, P.u(), -P.v(), P.d());
}

RationalPoint rat_add(const CurveQ& c, const RationalPoint& P, const RationalPoint& Q) {
    if (P.is_infinity()) return Q;
    if (Q.is_infinity()) return P;
    BigRat x1 = P.x(), y1 = P.y(), x2 = Q.x(), y2 = Q.y();
    BigRat lambda;
    if (x1 == x2) {
        if (y1 == -y2) return RationalPoint::infinity();
        // tangent slope (3x^2 - A) / 2y
        lambda = (3 * x1 * x1 - BigRat(c.A())) / (2 * y1);
    } else {
        lambda = (y2 - y1) / (x2 - x1);
    }
    lambda.canonicalize();
    BigRat x3 = lambda * lambda - x1 - x2;
    BigRat y3 = lambda * (x1 - x3) - y1;
    x3.canonicalize();
    y3.canonicalize();
    return RationalPoint::from_xy(c, x3, y3);
}

RationalPoint rat_mul(const CurveQ& c, long n, const RationalPoint& P) {
    if (n == 0 || P.is_infinity()) return RationalPoint::infinity();
    RationalPoint base = n < 0 ? rat_neg(c, P) : P;
    unsigned long mag = n < 0 ? static_cast<unsigned long>(-(n + 1)) + 1
                              : static_cast<unsigned long>(n);
    RationalPoint r = RationalPoint::infinity();
    while (mag) {
        if (mag & 1) r = rat_add(c, r, base);
        mag >>= 1;
        if (mag) base = rat_add(c, base, base);
    }
    return r;
}

PointFp reduce_point(const RationalPoint& P, const CurveFp& cp) {
    if (P.is_infinity()) return PointFp::infinity();
    BigInt pz(static_cast<unsigned long>(cp.p));
    BigInt dm = P.d() % pz;
    if (dm == 0) return PointFp::infinity();
    auto to_res = [&](const BigInt& z) {
        BigInt r = z % pz;
        if (r < 0) r += pz;
        return r.get_ui();
    };
    u64 d = to_res(P.d());
    u64 d2inv = invmod(mulmod(d, d, cp.p), cp.p);
    u64 x = mulmod(to_res(P.u()), d2inv, cp.p);
    u64 y = mulmod(to_res(P.v()), mulmod(d2inv, invmod(d, cp.p), cp.p), cp.p);
    return PointFp::affine(x, y);
}

} // namespace ecbsd
