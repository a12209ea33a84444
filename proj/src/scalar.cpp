#include "cychom/scalar.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cychom {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr i128 kMin = std::numeric_limits<std::int64_t>::min();

u128 gcd_u(u128 a, u128 b) {
    if (a <= std::numeric_limits<std::uint64_t>::max() && b <= std::numeric_limits<std::uint64_t>::max()) {
        auto x = static_cast<std::uint64_t>(a);
        auto y = static_cast<std::uint64_t>(b);
        while (y != 0) {
            auto r = x % y;
            x = y;
            y = r;
        }
        return x;
    }
    while (b != 0) {
        u128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

u128 abs_u(i128 v) { return v < 0 ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v); }

bool mul_ok(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }

mpz_class to_mpz(i128 v) {
    const bool neg = v < 0;
    u128 u = abs_u(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

}  // namespace

Scalar::Scalar(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(n, d);
}

Scalar::Scalar(const mpq_class& q) { *this = from_mpq(q); }

Scalar Scalar::from_mpq(mpq_class q) {
    q.canonicalize();
    Scalar s;
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
        s.num_ = q.get_num().get_si();
        s.den_ = q.get_den().get_si();
    } else {
        s.num_ = to_bits(new mpq_class(std::move(q)));
        s.den_ = 0;
    }
    return s;
}

Scalar Scalar::from_wide(i128 n, i128 d) {
    if (d < 0) {
        n = -n;
        d = -d;
    }
    if (n == 0) return Scalar{};
    const u128 g = gcd_u(abs_u(n), static_cast<u128>(d));
    if (g > 1) {
        n /= static_cast<i128>(g);
        d /= static_cast<i128>(g);
    }
    if (n >= kMin && n <= kMax && d <= kMax) {
        Scalar s;
        s.num_ = static_cast<std::int64_t>(n);
        s.den_ = static_cast<std::int64_t>(d);
        return s;
    }
    mpq_class q;
    q.get_num() = to_mpz(n);
    q.get_den() = to_mpz(d);
    return from_mpq(std::move(q));
}

Scalar Scalar::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    std::string s(text);
    if (s.front() == '+') s.erase(0, 1);
    const auto slash = s.find('/');
    auto digits_ok = [](std::string_view part, bool allow_sign) {
        if (allow_sign && !part.empty() && part.front() == '-') part.remove_prefix(1);
        if (part.empty()) return false;
        for (char c : part)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!digits_ok(s, true)) throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
        return Scalar(mpq_class(mpz_class(s)));
    }
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false))
        throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    mpz_class dz(den);
    if (dz == 0) throw std::domain_error("rational literal with zero denominator");
    return Scalar(mpq_class(mpz_class(num), dz));
}

bool Scalar::is_integer() const { return den_ == 1; }

int Scalar::sign() const noexcept {
    if (den_ == 0) return sgn(*big());
    return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
}

mpq_class Scalar::to_mpq() const {
    if (den_ == 0) return *big();
    mpq_class q;
    q.get_num() = mpz_class(static_cast<long>(num_));
    q.get_den() = mpz_class(static_cast<long>(den_));
    return q;
}

std::string Scalar::str() const {
    if (den_ == 0) return big()->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Scalar Scalar::operator-() const {
    if (den_ != 0 && num_ != std::numeric_limits<std::int64_t>::min()) {
        Scalar s;
        s.num_ = -num_;
        s.den_ = den_;
        return s;
    }
    return from_mpq(-to_mpq());
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    if (den_ != 0) return from_wide(den_, num_);
    return from_mpq(1 / to_mpq());
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.den_ != 0 && b.den_ != 0) {
        if (a.den_ == 1 && b.den_ == 1) return Scalar::from_wide(static_cast<i128>(a.num_) + b.num_, 1);
        const i128 n = static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_;
        return Scalar::from_wide(n, static_cast<i128>(a.den_) * b.den_);
    }
    return Scalar::from_mpq(a.to_mpq() + b.to_mpq());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.den_ != 0 && b.den_ != 0) {
        if (a.den_ == 1 && b.den_ == 1) return Scalar::from_wide(static_cast<i128>(a.num_) - b.num_, 1);
        const i128 n = static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_;
        return Scalar::from_wide(n, static_cast<i128>(a.den_) * b.den_);
    }
    return Scalar::from_mpq(a.to_mpq() - b.to_mpq());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.den_ != 0 && b.den_ != 0) {
        if (a.den_ == 1 && b.den_ == 1) return Scalar::from_wide(static_cast<i128>(a.num_) * b.num_, 1);
        return Scalar::from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
    }
    return Scalar::from_mpq(a.to_mpq() * b.to_mpq());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (a.den_ != 0 && b.den_ != 0)
        return Scalar::from_wide(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
    return Scalar::from_mpq(a.to_mpq() / b.to_mpq());
}

Scalar Scalar::sub_mul(const Scalar& a, const Scalar& f, const Scalar& b) {
    if (a.den_ != 0 && f.den_ != 0 && b.den_ != 0) {
        if (a.den_ == 1 && f.den_ == 1 && b.den_ == 1) {
            i128 p;
            if (mul_ok(f.num_, b.num_, p)) return from_wide(static_cast<i128>(a.num_) - p, 1);
        } else {
            i128 fb_n;
            i128 fb_d;
            i128 lhs;
            i128 rhs;
            i128 den;
            if (mul_ok(f.num_, b.num_, fb_n) && mul_ok(f.den_, b.den_, fb_d) && mul_ok(a.num_, fb_d, lhs) &&
                mul_ok(fb_n, a.den_, rhs) && mul_ok(a.den_, fb_d, den)) {
                i128 n;
                if (!__builtin_sub_overflow(lhs, rhs, &n)) return from_wide(n, den);
            }
        }
    }
    return from_mpq(a.to_mpq() - f.to_mpq() * b.to_mpq());
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (a.den_ != 0 && b.den_ != 0) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.den_ != 0 || b.den_ != 0) return false;
    return *a.big() == *b.big();
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
    if (a.den_ != 0 && b.den_ != 0) {
        const i128 l = static_cast<i128>(a.num_) * b.den_;
        const i128 r = static_cast<i128>(b.num_) * a.den_;
        return l <=> r;
    }
    const int c = cmp(a.to_mpq(), b.to_mpq());
    return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace cychom
