#ifndef CMW_RATIONAL_HPP_
#define CMW_RATIONAL_HPP_

#include <gmpxx.h>

#include <ostream>
#include <stdexcept>
#include <string>

namespace cmw {

using Rat = mpq_class;

/// Complex number with exact rational real and imaginary parts.
/// The coefficient field for every symbolic object in this library.
struct CRational {
    Rat re{0};
    Rat im{0};

    CRational() = default;
    CRational(long r) : re(r) {}
    CRational(const Rat& r) : re(r) {}
    CRational(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static CRational i() { return {Rat(0), Rat(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    CRational conj() const { return {re, -im}; }

    CRational operator-() const { return {-re, -im}; }
    CRational& operator+=(const CRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    CRational& operator-=(const CRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend CRational operator+(CRational a, const CRational& b) { return a += b; }
    friend CRational operator-(CRational a, const CRational& b) { return a -= b; }
    friend CRational operator*(const CRational& a, const CRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    CRational& operator*=(const CRational& o) { return *this = *this * o; }
    friend CRational operator/(const CRational& a, const CRational& b) {
        Rat d = b.re * b.re + b.im * b.im;
        if (d == 0) throw std::domain_error("CRational: division by zero");
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    CRational& operator/=(const CRational& o) { return *this = *this / o; }

    friend bool operator==(const CRational& a, const CRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const CRational& a, const CRational& b) { return !(a == b); }

    double real_d() const { return re.get_d(); }
    double imag_d() const { return im.get_d(); }

    friend std::ostream& operator<<(std::ostream& os, const CRational& c) {
        os << c.re.get_str();
        if (c.im != 0) os << (c.im > 0 ? "+" : "") << c.im.get_str() << "i";
        return os;
    }
};

/// Canonical "p/q" string (q omitted when 1), stable across platforms.
inline std::string rat_to_string(const Rat& r) {
    Rat c = r;
    c.canonicalize();
    return c.get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

inline CRational conj(const CRational& c) { return c.conj(); }

/// mpq_class(p, q) does not canonicalize; public entry points taking
/// caller-supplied rationals normalize through this first.
inline Rat canonical(Rat r) {
    r.canonicalize();
    return r;
}

}  // namespace cmw

#endif  // CMW_RATIONAL_HPP_
