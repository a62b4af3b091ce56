#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace recom {

// Exact rational arithmetic on int64 with 128-bit intermediates.
//
// Vote shares, seat shares, targets and thresholds are all ratios of small
// integers (vote tallies, seat counts, ensemble sizes), so every comparison
// that decides a mark or a pass/fail stays exact. Doubles appear only at
// reporting boundaries.
class Rational {
  public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {}
    Rational(std::int64_t num, std::int64_t den);

    // Nearest rational with denominator 10^9; exact for the short decimal
    // fractions used in configs (0.01, 0.07, 0.25, ...).
    static Rational from_decimal(double x);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }
    bool is_zero() const { return num_ == 0; }
    bool negative() const { return num_ < 0; }

    std::string str() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }

    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) = default;

  private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace recom
