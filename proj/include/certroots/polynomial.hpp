#pragma once

// Real univariate polynomials with exact rational coefficients.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "certroots/bigfloat.hpp"

namespace certroots {

/// f(x) = sum_{i=0}^{N} a_i x^i with a_N != 0. The zero polynomial has
/// degree -1.
class Polynomial {
   public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<long> coeffs) {
        coeffs_.reserve(coeffs.size());
        for (long c : coeffs) coeffs_.emplace_back(c);
        trim();
    }

    /// Coefficients given as doubles are taken as the exact binary values.
    static Polynomial from_doubles(std::span<const double> coeffs) {
        std::vector<Rational> q;
        q.reserve(coeffs.size());
        for (double c : coeffs) q.emplace_back(c);
        return Polynomial(std::move(q));
    }

    /// Monic polynomial prod (x - r_j).
    static Polynomial from_roots(std::span<const Rational> roots) {
        std::vector<Rational> c{Rational(1)};
        for (const Rational& r : roots) {
            std::vector<Rational> next(c.size() + 1);
            for (size_t i = 0; i < c.size(); ++i) {
                next[i + 1] += c[i];
                next[i] -= r * c[i];
            }
            c = std::move(next);
        }
        return Polynomial(std::move(c));
    }

    /// prod_{j=1}^{n} (x - j)
    static Polynomial wilkinson(int n) {
        std::vector<Rational> roots;
        for (int j = 1; j <= n; ++j) roots.emplace_back(j);
        return from_roots(roots);
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    std::span<const Rational> coeffs() const { return coeffs_; }
    const Rational& coeff(int i) const { return coeffs_.at(static_cast<size_t>(i)); }
    const Rational& leading() const { return coeffs_.back(); }
    bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

    /// Same roots, leading coefficient exactly 1.
    Polynomial monic() const {
        if (is_zero()) throw InputError("the zero polynomial has no monic form");
        std::vector<Rational> c(coeffs_);
        const Rational lead = coeffs_.back();
        for (auto& x : c) x /= lead;
        return Polynomial(std::move(c));
    }

    Polynomial scaled(const Rational& s) const {
        std::vector<Rational> c(coeffs_);
        for (auto& x : c) x *= s;
        return Polynomial(std::move(c));
    }

    /// f(-x): roots are negated.
    Polynomial reflected() const {
        std::vector<Rational> c(coeffs_);
        for (size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
        return Polynomial(std::move(c));
    }

    /// k-th derivative; the zero polynomial when k exceeds the degree.
    Polynomial derivative(unsigned k = 1) const {
        if (static_cast<int>(k) > degree()) return Polynomial();
        std::vector<Rational> c(coeffs_.size() - k);
        for (size_t i = 0; i < c.size(); ++i) {
            Rational falling(1);
            for (size_t j = 0; j < k; ++j) falling *= static_cast<long>(i + k - j);
            c[i] = coeffs_[i + k] * falling;
        }
        return Polynomial(std::move(c));
    }

    /// Antiderivative with the given constant term.
    Polynomial antiderivative(const Rational& constant) const {
        std::vector<Rational> c(coeffs_.size() + 1);
        c[0] = constant;
        for (size_t i = 0; i < coeffs_.size(); ++i) c[i + 1] = coeffs_[i] / static_cast<long>(i + 1);
        return Polynomial(std::move(c));
    }

    /// Coefficients of f(x + c); entry k equals f^(k)(c)/k!. Exact.
    std::vector<Rational> taylor_shift(const Rational& c) const {
        std::vector<Rational> b(coeffs_);
        const size_t n = b.size();
        for (size_t k = 0; k + 1 < n; ++k) {
            for (size_t j = n - 1; j-- > k;) b[j] += c * b[j + 1];
        }
        return b;
    }

    Rational evaluate(const Rational& x) const {
        Rational acc(0);
        for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

   private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

/// Coefficient-wise rational approximation with bounded relative error.
struct RationalApproxPolynomial {
    Polynomial approx;
    Polynomial source;
    double relative_tolerance = 1e-16;
};

/// Continued-fraction convergent of q: the first one within |q| * tol.
inline Rational rational_approximation(const Rational& q, const Rational& tol) {
    if (q == 0) return q;
    const Rational bound = abs(q) * tol;
    mpz_class h_prev(1), h_prev2(0), k_prev(0), k_prev2(1);
    Rational rest = q;
    for (;;) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
        const mpz_class h = a * h_prev + h_prev2;
        const mpz_class k = a * k_prev + k_prev2;
        Rational conv(h, k);
        conv.canonicalize();
        if (abs(q - conv) <= bound) return conv;
        Rational frac = rest - Rational(a);
        if (frac == 0) return conv;
        rest = 1 / frac;
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
    }
}

inline RationalApproxPolynomial rational_approximation(const Polynomial& f, double relative_tolerance = 1e-16) {
    const Rational tol = Rational(relative_tolerance);
    std::vector<Rational> c;
    c.reserve(f.coeffs().size());
    for (const Rational& a : f.coeffs()) c.push_back(rational_approximation(a, tol));
    return {Polynomial(std::move(c)), f, relative_tolerance};
}

// --- text serialization -----------------------------------------------------------------

/// Parses "p/q", integers, and decimals with optional exponent into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw InputError("empty number");
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        Rational q;
        if (s[0] == '+') s.erase(0, 1);
        if (q.set_str(s, 10) != 0) throw InputError("malformed rational: '" + s + "'");
        if (q.get_den() == 0) throw InputError("zero denominator: '" + s + "'");
        q.canonicalize();
        return q;
    }
    size_t pos = 0;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false, seen_digit = false;
    for (; pos < s.size(); ++pos) {
        const char ch = s[pos];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            seen_digit = true;
            if (seen_point) ++frac_digits;
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw InputError("malformed number: '" + s + "'");
    long exponent = 0;
    if (pos < s.size()) {
        if (s[pos] != 'e' && s[pos] != 'E') throw InputError("malformed number: '" + s + "'");
        const std::string exp_part = s.substr(pos + 1);
        size_t used = 0;
        try {
            exponent = std::stol(exp_part, &used);
        } catch (const std::exception&) {
            throw InputError("malformed exponent: '" + s + "'");
        }
        if (used != exp_part.size()) throw InputError("malformed exponent: '" + s + "'");
    }
    const long shift = exponent - frac_digits;
    mpz_class num(digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational q = shift >= 0 ? Rational(num * scale) : Rational(num, scale);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

/// Exact decimal when the denominator is of the form 2^a 5^b (always the
/// case for binary floating point values), otherwise "p/q".
inline std::string format_rational(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str(10);
    mpz_class den = q.get_den();
    unsigned long twos = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), mpz_class(2).get_mpz_t());
    unsigned long fives = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), mpz_class(5).get_mpz_t());
    if (den != 1) return q.get_str(10);
    const unsigned long places = std::max(twos, fives);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    mpz_class scaled = abs(q.get_num()) * scale / q.get_den();
    std::string digits = scaled.get_str(10);
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    std::string out = q < 0 ? "-" : "";
    out += digits.substr(0, digits.size() - places);
    out += '.';
    out += digits.substr(digits.size() - places);
    return out;
}

/// Format: line 1 "degree N", then N+1 lines holding a_0 ... a_N.
inline Polynomial read_polynomial(std::istream& in) {
    std::string line;
    auto next_line = [&](std::string& out) {
        while (std::getline(in, out)) {
            const auto first = out.find_first_not_of(" \t\r");
            if (first == std::string::npos || out[first] == '#') continue;
            out = out.substr(first);
            while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
            return true;
        }
        return false;
    };
    if (!next_line(line)) throw InputError("empty polynomial file");
    std::istringstream header(line);
    std::string keyword;
    long degree = -1;
    if (!(header >> keyword >> degree) || keyword != "degree") throw InputError("expected 'degree N' header");
    if (degree < 0) throw InputError("negative degree");
    std::vector<Rational> c;
    for (long i = 0; i <= degree; ++i) {
        if (!next_line(line)) throw InputError("expected " + std::to_string(degree + 1) + " coefficients");
        c.push_back(parse_rational(line));
    }
    if (next_line(line)) throw InputError("trailing data after coefficients");
    if (c.back() == 0) throw InputError("leading coefficient a_N is zero");
    return Polynomial(std::move(c));
}

inline Polynomial read_polynomial_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open polynomial file: " + path);
    return read_polynomial(in);
}

inline void write_polynomial(std::ostream& out, const Polynomial& f) {
    out << "degree " << f.degree() << '\n';
    for (const Rational& a : f.coeffs()) out << format_rational(a) << '\n';
}

}  // namespace certroots
