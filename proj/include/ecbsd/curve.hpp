#ifndef ECBSD_CURVE_HPP
#define ECBSD_CURVE_HPP

// Integral Weierstrass models y^2 = x^3 - A*x - B over Q, their reductions
// mod p, and the group law in both settings (exact rationals over Q, machine
// words over F_p). All values are immutable after construction and safe to
// share across threads.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ecbsd/errors.hpp"
#include "ecbsd/modmath.hpp"

namespace ecbsd {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// Nonsingular curve y^2 = x^3 - A*x - B with A, B integers.
class CurveQ {
public:
    CurveQ(BigInt A, BigInt B);           // rejects discriminant 0

    const BigInt& A() const { return a_; }
    const BigInt& B() const { return b_; }

    /// 16*(4*A^3 - 27*B^2), nonzero by construction.
    const BigInt& discriminant() const { return disc_; }

    /// (k^4*A, k^6*B); the companion point map is (x, y) -> (k^2 x, k^3 y).
    CurveQ scaled(const BigInt& k) const;

    /// Text form "A,B" (base-10, optional sign), as used by the CLI.
    static CurveQ parse(std::string_view text);
    std::string to_string() const;

private:
    BigInt a_, b_, disc_;
};

BigInt discriminant(const BigInt& A, const BigInt& B);

/// Reduced curve y^2 = x^3 - a*x - b over F_p, with a, b least residues.
struct CurveFp {
    u64 p = 0;
    u64 a = 0;
    u64 b = 0;
};

/// Affine point or the point at infinity.
struct PointFp {
    u64 x = 0;
    u64 y = 0;
    bool inf = true;

    static PointFp infinity() { return {}; }
    static PointFp affine(u64 x, u64 y) { return {x, y, false}; }
    bool operator==(const PointFp&) const = default;
};

/// CurveFp when p is a good prime, nullopt when p | disc. Non-prime p is rejected.
std::optional<CurveFp> reduce_mod_p(const CurveQ& c, u64 p);

bool on_curve(const CurveFp& c, const PointFp& P);
PointFp point_neg(const CurveFp& c, const PointFp& P);
PointFp point_add(const CurveFp& c, const PointFp& P, const PointFp& Q);
PointFp point_mul(const CurveFp& c, i64 n, const PointFp& P);

namespace detail {
// Group law without the on-curve precondition checks, for counting loops.
PointFp add_unchecked(const CurveFp& c, const PointFp& P, const PointFp& Q);
PointFp mul_unchecked(const CurveFp& c, u64 n, const PointFp& P);
} // namespace detail

/// Rational point in lowest terms: x = u/d^2, y = v/d^3, d >= 1, or infinity.
/// The cleared form v^2 = u^3 - A*u*d^4 - B*d^6 holds exactly over Z.
class RationalPoint {
public:
    static RationalPoint infinity();
    static RationalPoint from_uvd(const CurveQ& c, BigInt u, BigInt v, BigInt d);
    static RationalPoint from_xy(const CurveQ& c, const BigRat& x, const BigRat& y);

    bool is_infinity() const { return inf_; }
    const BigInt& u() const { return u_; }
    const BigInt& v() const { return v_; }
    const BigInt& d() const { return d_; }
    BigRat x() const;
    BigRat y() const;

    std::string to_string() const;        // "inf" or "x,y" with reduced fractions
    bool operator==(const RationalPoint&) const;

private:
    RationalPoint() = default;
    bool inf_ = true;
    BigInt u_, v_, d_;
};

bool on_curve(const CurveQ& c, const RationalPoint& P);
RationalPoint rat_neg(const CurveQ& c, const RationalPoint& P);
RationalPoint rat_add(const CurveQ& c, const RationalPoint& P, const RationalPoint& Q);
RationalPoint rat_mul(const CurveQ& c, long n, const RationalPoint& P);

/// Image of P in E(F_p); the point at infinity when p divides d.
PointFp reduce_point(const RationalPoint& P, const CurveFp& cp);

} // namespace ecbsd

#endif
