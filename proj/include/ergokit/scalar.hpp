#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace ergokit {

// a + b*sqrt(d) over Q, d fixed for the whole session.
class Scalar {
public:
    Scalar() = default;
    Scalar(long v) : a_(v) {}
    Scalar(const mpz_class& v) : a_(v) {}
    Scalar(const mpq_class& a) : a_(a) { a_.canonicalize(); }
    Scalar(const mpq_class& a, const mpq_class& b);
    Scalar(long p, long q) : a_(p, q) { a_.canonicalize(); }

    static void set_field(long d);
    static long field();
    static Scalar root();  // sqrt(d)

    const mpq_class& rat() const { return a_; }
    const mpq_class& irr() const { return b_; }
    bool is_rational() const { return b_ == 0; }
    bool is_integer() const { return b_ == 0 && a_.get_den() == 1; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }
    int sign() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
    friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
    friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
    friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }

    friend bool operator==(const Scalar& x, const Scalar& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend std::strong_ordering operator<=>(const Scalar& x, const Scalar& y);

    mpz_class floor() const;
    mpz_class ceil() const;
    Scalar abs() const { return sign() < 0 ? -*this : *this; }

    std::string str() const;
    static Scalar parse(std::string_view s);
    double approx() const;

private:
    mpq_class a_;
    mpq_class b_;
};

inline const Scalar& min(const Scalar& x, const Scalar& y) { return y < x ? y : x; }
inline const Scalar& max(const Scalar& x, const Scalar& y) { return x < y ? y : x; }

// Least common multiple of two positive scalars whose ratio is rational.
Scalar lcm(const Scalar& p, const Scalar& q);
// x/y when rational, as a reduced fraction; throws INCOMMENSURABLE_PERIODS otherwise.
mpq_class rational_ratio(const Scalar& x, const Scalar& y);
std::string rat_str(const mpq_class& q);

// Lebesgue-measure values, possibly infinite.
struct ExtMeasure {
    bool infinite = false;
    Scalar value;

    static ExtMeasure inf() { return {true, Scalar()}; }
    static ExtMeasure fin(const Scalar& v) { return {false, v}; }

    bool is_zero() const { return !infinite && value.is_zero(); }
    std::string str() const { return infinite ? "inf" : value.str(); }
    friend ExtMeasure operator+(const ExtMeasure& x, const ExtMeasure& y) {
        if (x.infinite || y.infinite) return inf();
        return fin(x.value + y.value);
    }
    friend bool operator==(const ExtMeasure& x, const ExtMeasure& y) {
        return x.infinite == y.infinite && (x.infinite || x.value == y.value);
    }
    friend std::strong_ordering operator<=>(const ExtMeasure& x, const ExtMeasure& y) {
        if (x.infinite || y.infinite) return x.infinite <=> y.infinite;
        return x.value <=> y.value;
    }
};

}  // namespace ergokit
