#pragma once

// Arbitrary-precision floating point numbers (MPFR) and exact rationals (GMP).
//
// Every BigFloat carries its own precision; binary operations produce a
// result at the larger of the two operand precisions. There is no ambient
// default precision.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace certroots {

using Rational = mpq_class;

/// Working precision in bits.
struct Precision {
    unsigned bits = 256;

    constexpr bool is_hardware() const { return bits <= 53; }
    friend constexpr bool operator==(Precision, Precision) = default;
    friend constexpr auto operator<=>(Precision, Precision) = default;
};

inline constexpr Precision kDoublePrecision{53};
inline constexpr Precision kDefaultPrecision{256};

/// Raised when a computation cannot be decided at the current precision and
/// the caller is expected to retry at a higher one.
class PrecisionError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed user input (files, arguments, degenerate polynomials).
class InputError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A result was computed but could not be certified.
class UncertifiedError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// An iteration or precision budget ran out before convergence.
class BudgetError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class Round { nearest, up, down };

inline mpfr_rnd_t to_mpfr(Round r) {
    switch (r) {
        case Round::up:
            return MPFR_RNDU;
        case Round::down:
            return MPFR_RNDD;
        default:
            return MPFR_RNDN;
    }
}

class BigFloat {
   public:
    explicit BigFloat(Precision prec = kDefaultPrecision) {
        mpfr_init2(value_, static_cast<mpfr_prec_t>(prec.bits));
        mpfr_set_zero(value_, 1);
    }
    BigFloat(double v, Precision prec) {
        mpfr_init2(value_, static_cast<mpfr_prec_t>(prec.bits));
        mpfr_set_d(value_, v, MPFR_RNDN);
    }
    BigFloat(long v, Precision prec) {
        mpfr_init2(value_, static_cast<mpfr_prec_t>(prec.bits));
        mpfr_set_si(value_, v, MPFR_RNDN);
    }
    BigFloat(const Rational& q, Precision prec, Round rnd = Round::nearest) {
        mpfr_init2(value_, static_cast<mpfr_prec_t>(prec.bits));
        inexact_ = mpfr_set_q(value_, q.get_mpq_t(), to_mpfr(rnd)) != 0;
    }

    BigFloat(const BigFloat& other) {
        mpfr_init2(value_, mpfr_get_prec(other.value_));
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& other) noexcept {
        mpfr_init2(value_, MPFR_PREC_MIN);
        mpfr_swap(value_, other.value_);
    }
    BigFloat& operator=(const BigFloat& other) {
        if (this != &other) {
            mpfr_set_prec(value_, mpfr_get_prec(other.value_));
            mpfr_set(value_, other.value_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& other) noexcept {
        mpfr_swap(value_, other.value_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(value_); }

    /// Parses a decimal string (scientific notation accepted).
    static BigFloat parse(std::string_view text, Precision prec, Round rnd = Round::nearest) {
        BigFloat out(prec);
        std::string s(text);
        if (mpfr_set_str(out.value_, s.c_str(), 10, to_mpfr(rnd)) != 0 && !s.empty()) {
            // mpfr_set_str returns -1 on a malformed string; a nonzero
            // ternary value is not reported by this function.
            throw InputError("malformed decimal number: '" + s + "'");
        }
        if (s.empty()) throw InputError("empty decimal number");
        return out;
    }

    static BigFloat infinity(Precision prec) {
        BigFloat out(prec);
        mpfr_set_inf(out.value_, 1);
        return out;
    }

    /// Copy of this value rounded to a new precision.
    BigFloat rounded(Precision prec, Round rnd = Round::nearest) const {
        BigFloat out(prec);
        mpfr_set(out.value_, value_, to_mpfr(rnd));
        return out;
    }

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }

    Precision precision() const { return Precision{static_cast<unsigned>(mpfr_get_prec(value_))}; }

    /// True when the constructor from a Rational had to round.
    bool was_rounded() const { return inexact_; }

    double to_double(Round rnd = Round::nearest) const { return mpfr_get_d(value_, to_mpfr(rnd)); }

    Rational to_rational() const {
        if (!is_finite()) throw InputError("cannot convert a non-finite value to a rational");
        Rational q;
        mpfr_get_q(q.get_mpq_t(), value_);
        return q;
    }

    bool is_zero() const { return mpfr_zero_p(value_) != 0; }
    bool is_finite() const { return mpfr_number_p(value_) != 0; }
    bool is_nan() const { return mpfr_nan_p(value_) != 0; }
    int sign() const { return mpfr_sgn(value_); }

    /// Decimal scientific string with the given number of significant digits.
    /// digits == 0 selects enough digits to round-trip at this precision.
    std::string to_string(int digits = 0, Round rnd = Round::nearest) const {
        if (mpfr_nan_p(value_)) return "nan";
        if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
        if (mpfr_zero_p(value_)) return "0";
        if (digits <= 0) digits = round_trip_digits(precision());
        mpfr_exp_t exp10 = 0;
        char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), value_, to_mpfr(rnd));
        std::string mant(raw);
        mpfr_free_str(raw);
        std::string out;
        if (mant.front() == '-') {
            out.push_back('-');
            mant.erase(0, 1);
        }
        // Trailing zeros carry no information; the value is unchanged.
        while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
        const long e = static_cast<long>(exp10) - 1;
        if (e >= -5 && e < 21 && e < digits) {
            // Fixed notation for moderate exponents.
            if (e < 0) {
                out += "0." + std::string(static_cast<size_t>(-e - 1), '0') + mant;
            } else if (static_cast<size_t>(e) + 1 >= mant.size()) {
                out += mant + std::string(static_cast<size_t>(e) + 1 - mant.size(), '0');
            } else {
                out += mant.substr(0, static_cast<size_t>(e) + 1) + "." + mant.substr(static_cast<size_t>(e) + 1);
            }
            return out;
        }
        out.push_back(mant[0]);
        if (mant.size() > 1) out += "." + mant.substr(1);
        out += "e" + std::to_string(e);
        return out;
    }

    static int round_trip_digits(Precision prec) {
        return static_cast<int>(std::ceil(prec.bits * 0.30102999566398120)) + 2;
    }

    friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.value_, b.value_); }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.value_, b.value_) != 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.value_, b.value_) != 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

   private:
    mpfr_t value_;
    bool inexact_ = false;
};

namespace detail {

inline Precision wider(const BigFloat& a, const BigFloat& b) {
    return a.precision().bits >= b.precision().bits ? a.precision() : b.precision();
}

template <class Fn>
BigFloat binary(const BigFloat& a, const BigFloat& b, Round rnd, Fn fn) {
    BigFloat out(wider(a, b));
    fn(out.get(), a.get(), b.get(), to_mpfr(rnd));
    return out;
}

}  // namespace detail

inline BigFloat add(const BigFloat& a, const BigFloat& b, Round rnd = Round::nearest) {
    return detail::binary(a, b, rnd, mpfr_add);
}
inline BigFloat sub(const BigFloat& a, const BigFloat& b, Round rnd = Round::nearest) {
    return detail::binary(a, b, rnd, mpfr_sub);
}
inline BigFloat mul(const BigFloat& a, const BigFloat& b, Round rnd = Round::nearest) {
    return detail::binary(a, b, rnd, mpfr_mul);
}
inline BigFloat div(const BigFloat& a, const BigFloat& b, Round rnd = Round::nearest) {
    return detail::binary(a, b, rnd, mpfr_div);
}
inline BigFloat hypot(const BigFloat& a, const BigFloat& b, Round rnd = Round::nearest) {
    return detail::binary(a, b, rnd, mpfr_hypot);
}
inline BigFloat sqrt(const BigFloat& a, Round rnd = Round::nearest) {
    BigFloat out(a.precision());
    mpfr_sqrt(out.get(), a.get(), to_mpfr(rnd));
    return out;
}
inline BigFloat abs(const BigFloat& a) {
    BigFloat out(a.precision());
    mpfr_abs(out.get(), a.get(), MPFR_RNDN);
    return out;
}
inline BigFloat neg(const BigFloat& a) {
    BigFloat out(a.precision());
    mpfr_neg(out.get(), a.get(), MPFR_RNDN);
    return out;
}
/// k-th root of a non-negative value with directed rounding.
inline BigFloat rootn(const BigFloat& a, unsigned long k, Round rnd) {
    BigFloat out(a.precision());
    mpfr_rootn_ui(out.get(), a.get(), k, to_mpfr(rnd));
    return out;
}
inline BigFloat ldexp(const BigFloat& a, long e) {
    BigFloat out(a.precision());
    mpfr_mul_2si(out.get(), a.get(), e, MPFR_RNDN);
    return out;
}
inline BigFloat log(const BigFloat& a, Round rnd = Round::nearest) {
    BigFloat out(a.precision());
    mpfr_log(out.get(), a.get(), to_mpfr(rnd));
    return out;
}
inline BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }
inline BigFloat min(const BigFloat& a, const BigFloat& b) { return b < a ? b : a; }

inline BigFloat operator+(const BigFloat& a, const BigFloat& b) { return add(a, b); }
inline BigFloat operator-(const BigFloat& a, const BigFloat& b) { return sub(a, b); }
inline BigFloat operator*(const BigFloat& a, const BigFloat& b) { return mul(a, b); }
inline BigFloat operator/(const BigFloat& a, const BigFloat& b) { return div(a, b); }
inline BigFloat operator-(const BigFloat& a) { return neg(a); }

inline std::string to_string(const Rational& q) { return q.get_str(10); }

}  // namespace certroots
