#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cychom {

// Exact rational number. Values whose reduced numerator and denominator fit
// in int64 live inline; larger ones spill to a heap-allocated GMP rational.
// Both forms keep gcd(|num|, den) == 1 and den > 0, and a value that fits
// inline is never stored in the big form, so equality is representational.
class Scalar {
public:
    Scalar() noexcept = default;
    Scalar(std::int64_t n) noexcept : num_(n) {}  // NOLINT(google-explicit-constructor)
    Scalar(std::int64_t n, std::int64_t d);
    explicit Scalar(const mpq_class& q);

    Scalar(const Scalar& o) : num_(o.num_), den_(o.den_) {
        if (o.den_ == 0) num_ = to_bits(new mpq_class(*o.big()));
    }
    Scalar(Scalar&& o) noexcept : num_(o.num_), den_(o.den_) {
        o.num_ = 0;
        o.den_ = 1;
    }
    Scalar& operator=(const Scalar& o) {
        if (this != &o) {
            Scalar tmp(o);
            swap(tmp);
        }
        return *this;
    }
    Scalar& operator=(Scalar&& o) noexcept {
        swap(o);
        return *this;
    }
    ~Scalar() {
        if (den_ == 0) delete big();
    }
    void swap(Scalar& o) noexcept {
        std::swap(num_, o.num_);
        std::swap(den_, o.den_);
    }

    // Accepts "p", "-p", "+p", "p/q" with optional surrounding whitespace.
    static Scalar parse(std::string_view text);

    bool is_zero() const noexcept { return den_ == 1 && num_ == 0; }
    bool is_one() const noexcept { return den_ == 1 && num_ == 1; }
    bool is_small() const noexcept { return den_ != 0; }
    bool is_integer() const;
    int sign() const noexcept;

    mpq_class to_mpq() const;
    std::string str() const;

    Scalar operator-() const;
    Scalar inverse() const;

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
    Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

    // a - f*b, the elimination kernel; avoids a temporary on the fast path.
    static Scalar sub_mul(const Scalar& a, const Scalar& f, const Scalar& b);

    friend bool operator==(const Scalar& a, const Scalar& b);
    friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);

private:
    static std::int64_t to_bits(mpq_class* p) noexcept { return reinterpret_cast<std::intptr_t>(p); }
    mpq_class* big() const noexcept { return reinterpret_cast<mpq_class*>(static_cast<std::intptr_t>(num_)); }
    static Scalar from_wide(__int128 n, __int128 d);
    static Scalar from_mpq(mpq_class q);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;  // 0 marks the big representation
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace cychom
