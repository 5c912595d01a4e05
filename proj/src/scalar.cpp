#include "ergokit/scalar.hpp"

#include <cmath>
#include <regex>

#include "ergokit/error.hpp"

namespace ergokit {

namespace {

long g_d = 0;

int sgn(const mpq_class& q) { return sgn(q.get_num()); }

bool squarefree(long d) {
    for (long p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}

mpq_class parse_rat(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw Error("PARSE_ERROR", "bad rational '" + s + "'");
    q.canonicalize();
    return q;
}

}  // namespace

void Scalar::set_field(long d) {
    if (d < 0 || d == 1 || (d > 1 && !squarefree(d)))
        throw Error("FIELD_MISMATCH", "field parameter must be 0 or a squarefree integer > 1, got " + std::to_string(d));
    g_d = d;
}

long Scalar::field() { return g_d; }

Scalar Scalar::root() {
    if (g_d == 0) throw Error("FIELD_MISMATCH", "session field is Q");
    return Scalar(mpq_class(0), mpq_class(1));
}

Scalar::Scalar(const mpq_class& a, const mpq_class& b) : a_(a), b_(b) {
    a_.canonicalize();
    b_.canonicalize();
    if (g_d == 0 && b_ != 0) throw Error("FIELD_MISMATCH", "irrational part in a rational session");
}

int Scalar::sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // opposite signs: compare a^2 with b^2 d
    mpq_class lhs = a_ * a_, rhs = b_ * b_ * g_d;
    int c = cmp(lhs, rhs);
    return c == 0 ? 0 : (c > 0 ? sa : sb);
}

Scalar Scalar::operator-() const {
    Scalar r;
    r.a_ = -a_;
    r.b_ = -b_;
    return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    mpq_class na = a_ * o.a_ + b_ * o.b_ * g_d;
    mpq_class nb = a_ * o.b_ + b_ * o.a_;
    a_ = na;
    b_ = nb;
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.is_zero()) throw Error("DIVISION_BY_ZERO", "division by zero");
    mpq_class n = o.a_ * o.a_ - o.b_ * o.b_ * g_d;
    mpq_class na = (a_ * o.a_ - b_ * o.b_ * g_d) / n;
    mpq_class nb = (b_ * o.a_ - a_ * o.b_) / n;
    a_ = na;
    b_ = nb;
    return *this;
}

std::strong_ordering operator<=>(const Scalar& x, const Scalar& y) {
    int s = (x - y).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

mpz_class Scalar::floor() const {
    mpz_class k;
    if (b_ == 0) {
        mpz_fdiv_q(k.get_mpz_t(), a_.get_num_mpz_t(), a_.get_den_mpz_t());
        return k;
    }
    // |b| sqrt(d) = sqrt(P Q) / Q with b^2 d = P/Q
    mpq_class t = b_ * b_ * g_d;
    mpz_class pq = t.get_num() * t.get_den(), r;
    mpz_sqrt(r.get_mpz_t(), pq.get_mpz_t());
    mpq_class approx = a_ + (sgn(b_) > 0 ? mpq_class(r, t.get_den()) : mpq_class(-r, t.get_den()));
    approx.canonicalize();
    mpz_fdiv_q(k.get_mpz_t(), approx.get_num_mpz_t(), approx.get_den_mpz_t());
    while (Scalar(k) > *this) --k;
    while (Scalar(mpz_class(k + 1)) <= *this) ++k;
    return k;
}

mpz_class Scalar::ceil() const {
    mpz_class f = floor();
    if (Scalar(f) == *this) return f;
    return f + 1;
}

std::string rat_str(const mpq_class& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string Scalar::str() const {
    if (b_ == 0) return rat_str(a_);
    std::string s = rat_str(a_);
    s += sgn(b_) > 0 ? "+" : "-";
    s += rat_str(mpq_class(::abs(b_)));
    s += "*rt(" + std::to_string(g_d) + ")";
    return s;
}

Scalar Scalar::parse(std::string_view sv) {
    static const std::regex rat_re(R"(^[+-]?\d+(/\d+)?$)");
    static const std::regex full_re(R"(^([+-]?\d+(?:/\d+)?)([+-]\d+(?:/\d+)?)\*rt\((\d+)\)$)");
    static const std::regex pure_re(R"(^([+-]?\d+(?:/\d+)?)\*rt\((\d+)\)$)");
    std::string s(sv);
    std::smatch m;
    if (std::regex_match(s, rat_re)) return Scalar(parse_rat(s));
    auto check_d = [](const std::string& ds) {
        long d = std::stol(ds);
        if (d != g_d) throw Error("FIELD_MISMATCH", "scalar uses rt(" + ds + ") but session field is d=" + std::to_string(g_d));
    };
    if (std::regex_match(s, m, full_re)) {
        check_d(m[3]);
        std::string b = m[2];
        if (b[0] == '+') b.erase(0, 1);
        return Scalar(parse_rat(m[1]), parse_rat(b));
    }
    if (std::regex_match(s, m, pure_re)) {
        check_d(m[2]);
        return Scalar(mpq_class(0), parse_rat(m[1]));
    }
    throw Error("PARSE_ERROR", "bad scalar '" + s + "'");
}

double Scalar::approx() const {
    return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(g_d));
}

mpq_class rational_ratio(const Scalar& x, const Scalar& y) {
    Scalar r = x / y;
    if (!r.is_rational()) throw Error("INCOMMENSURABLE_PERIODS", "ratio " + x.str() + " / " + y.str() + " is irrational");
    return r.rat();
}

Scalar lcm(const Scalar& p, const Scalar& q) {
    mpq_class r = rational_ratio(p, q);  // p/q = a/b
    return p * Scalar(mpz_class(r.get_den()));
}

}  // namespace ergokit
