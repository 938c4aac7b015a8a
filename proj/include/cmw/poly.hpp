#ifndef CMW_POLY_HPP_
#define CMW_POLY_HPP_

#include <algorithm>
#include <cassert>
#include <compare>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "cmw/rational.hpp"

namespace cmw {

/// Monomial key z^a zbar^b u^k. Ordering is lexicographic so term
/// iteration (and every emitted file) is deterministic.
struct Mono {
    std::vector<int> a;  // z exponents
    std::vector<int> b;  // zbar exponents
    int k = 0;           // u exponent

    int weight() const {
        return std::accumulate(a.begin(), a.end(), 0) +
               std::accumulate(b.begin(), b.end(), 0) + 2 * k;
    }
    int degree() const {
        return std::accumulate(a.begin(), a.end(), 0) +
               std::accumulate(b.begin(), b.end(), 0) + k;
    }
    int za() const { return std::accumulate(a.begin(), a.end(), 0); }
    int zb() const { return std::accumulate(b.begin(), b.end(), 0); }

    Mono swapped() const { return {b, a, k}; }

    friend auto operator<=>(const Mono&, const Mono&) = default;
};

/// Polynomial in (z_1..z_n, zbar_1..zbar_n, u) with CRational coefficients.
/// Real-valuedness (coeff(a,b,k) == conj(coeff(b,a,k))) is an invariant of
/// the pipeline inputs/outputs, checked via is_real(); intermediate values
/// may be genuinely complex.
class Poly {
  public:
    Poly() : n_(0) {}
    explicit Poly(int n) : n_(n) { assert(n >= 0); }

    static Poly constant(int n, CRational c) {
        Poly p(n);
        p.add_term(Mono{std::vector<int>(n, 0), std::vector<int>(n, 0), 0}, std::move(c));
        return p;
    }
    static Poly var_z(int n, int j) {
        Poly p(n);
        Mono m{std::vector<int>(n, 0), std::vector<int>(n, 0), 0};
        m.a[j] = 1;
        p.add_term(m, CRational(1));
        return p;
    }
    static Poly var_zbar(int n, int j) {
        Poly p(n);
        Mono m{std::vector<int>(n, 0), std::vector<int>(n, 0), 0};
        m.b[j] = 1;
        p.add_term(m, CRational(1));
        return p;
    }
    static Poly var_u(int n) {
        Poly p(n);
        p.add_term(Mono{std::vector<int>(n, 0), std::vector<int>(n, 0), 1}, CRational(1));
        return p;
    }

    int nvars() const { return n_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t term_count() const { return t_.size(); }
    const std::map<Mono, CRational>& terms() const { return t_; }

    CRational coeff(const Mono& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? CRational() : it->second;
    }

    void add_term(const Mono& m, const CRational& c) {
        assert((int)m.a.size() == n_ && (int)m.b.size() == n_);
        if (c.is_zero()) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        check_same(o);
        for (const auto& [m, c] : o.t_) {
            auto [it, fresh] = t_.emplace(m, c);
            if (!fresh) {
                it->second += c;
                if (it->second.is_zero()) t_.erase(it);
            }
        }
        return *this;
    }
    Poly& operator-=(const Poly& o) { return *this += -o; }
    Poly operator-() const {
        Poly r(n_);
        for (const auto& [m, c] : t_) r.t_.emplace(m, -c);
        return r;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) { return mul_trunc(a, b, -1); }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend Poly operator*(const CRational& c, const Poly& p) {
        Poly r(p.n_);
        if (c.is_zero()) return r;
        for (const auto& [m, v] : p.t_) r.t_.emplace(m, c * v);
        return r;
    }

    /// Product truncated to weighted degree <= maxw (maxw < 0: no cap).
    static Poly mul_trunc(const Poly& a, const Poly& b, int maxw) {
        a.check_same(b);
        Poly r(a.n_);
        for (const auto& [ma, ca] : a.t_) {
            int wa = ma.weight();
            if (maxw >= 0 && wa > maxw) continue;
            for (const auto& [mb, cb] : b.t_) {
                if (maxw >= 0 && wa + mb.weight() > maxw) continue;
                Mono m = ma;
                for (int j = 0; j < a.n_; ++j) {
                    m.a[j] += mb.a[j];
                    m.b[j] += mb.b[j];
                }
                m.k += mb.k;
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }

    Poly conj() const {
        Poly r(n_);
        for (const auto& [m, c] : t_) r.t_.emplace(m.swapped(), c.conj());
        return r;
    }

    bool is_real() const {
        for (const auto& [m, c] : t_)
            if (coeff(m.swapped()) != c.conj()) return false;
        return true;
    }

    Poly filter(const std::function<bool(const Mono&)>& keep) const {
        Poly r(n_);
        for (const auto& [m, c] : t_)
            if (keep(m)) r.t_.emplace(m, c);
        return r;
    }

    Poly weighted_component(int d) const {
        return filter([d](const Mono& m) { return m.weight() == d; });
    }
    Poly bidegree_component(int p, int q, int k) const {
        return filter([=](const Mono& m) { return m.za() == p && m.zb() == q && m.k == k; });
    }
    Poly truncate_weight(int maxw) const {
        return filter([maxw](const Mono& m) { return m.weight() <= maxw; });
    }
    int min_weight() const {  // weight of the lowest-weight term; -1 if zero
        int w = -1;
        for (const auto& [m, c] : t_) {
            int mw = m.weight();
            if (w < 0 || mw < w) w = mw;
        }
        return w;
    }

    Poly derivative_z(int j) const {
        Poly r(n_);
        for (const auto& [m, c] : t_) {
            if (m.a[j] == 0) continue;
            Mono d = m;
            d.a[j] -= 1;
            r.add_term(d, CRational(Rat(m.a[j])) * c);
        }
        return r;
    }
    Poly derivative_zbar(int j) const {
        Poly r(n_);
        for (const auto& [m, c] : t_) {
            if (m.b[j] == 0) continue;
            Mono d = m;
            d.b[j] -= 1;
            r.add_term(d, CRational(Rat(m.b[j])) * c);
        }
        return r;
    }

    /// Substitute z_j -> zs[j], zbar_j -> zbs[j], u -> us, truncating every
    /// intermediate product to weighted degree <= maxw (maxw < 0: exact).
    Poly substitute(const std::vector<Poly>& zs, const std::vector<Poly>& zbs,
                    const Poly& us, int maxw) const {
        assert((int)zs.size() == n_ && (int)zbs.size() == n_);
        int m = zs[0].nvars();
        // power caches
        std::vector<std::vector<Poly>> pz(n_), pzb(n_);
        std::vector<Poly> pu;
        auto pw = [&](std::vector<Poly>& cache, const Poly& base, int e) -> const Poly& {
            if (cache.empty()) cache.push_back(Poly::constant(m, CRational(1)));
            while ((int)cache.size() <= e)
                cache.push_back(mul_trunc(cache.back(), base, maxw));
            return cache[e];
        };
        Poly out(m);
        for (const auto& [mo, c] : t_) {
            Poly term = Poly::constant(m, c);
            for (int j = 0; j < n_ && !term.is_zero(); ++j)
                if (mo.a[j]) term = mul_trunc(term, pw(pz[j], zs[j], mo.a[j]), maxw);
            for (int j = 0; j < n_ && !term.is_zero(); ++j)
                if (mo.b[j]) term = mul_trunc(term, pw(pzb[j], zbs[j], mo.b[j]), maxw);
            if (mo.k && !term.is_zero()) term = mul_trunc(term, pw(pu, us, mo.k), maxw);
            out += term;
        }
        return out;
    }

    CRational eval(const std::vector<CRational>& z, const CRational& u) const {
        assert((int)z.size() == n_);
        CRational out;
        for (const auto& [m, c] : t_) {
            CRational v = c;
            for (int j = 0; j < n_; ++j) {
                for (int e = 0; e < m.a[j]; ++e) v *= z[j];
                for (int e = 0; e < m.b[j]; ++e) v *= z[j].conj();
            }
            for (int e = 0; e < m.k; ++e) v *= u;
            out += v;
        }
        return out;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.n_ == b.n_ && a.t_ == b.t_;
    }

  private:
    void check_same(const Poly& o) const {
        if (n_ != o.n_) throw std::invalid_argument("Poly: variable count mismatch");
    }

    int n_;
    std::map<Mono, CRational> t_;
};

inline std::ostream& operator<<(std::ostream& os, const Poly& p) {
    if (p.terms().empty()) return os << "0";
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c << ")";
        for (std::size_t j = 0; j < m.a.size(); ++j) {
            if (m.a[j]) os << "*z" << j + 1 << "^" << m.a[j];
            if (m.b[j]) os << "*zb" << j + 1 << "^" << m.b[j];
        }
        if (m.k) os << "*u^" << m.k;
    }
    return os;
}

inline Poly weighted_component(const Poly& p, int d) { return p.weighted_component(d); }
inline Poly bidegree_component(const Poly& p, int pp, int q, int k) {
    return p.bidegree_component(pp, q, k);
}

/// Re / Im of a complex polynomial, as polynomials.
inline Poly re_part(const Poly& p) {
    CRational half(Rat(1, 2));
    return half * (p + p.conj());
}
inline Poly im_part(const Poly& p) {
    CRational h(Rat(0), Rat(-1, 2));  // 1/(2i)
    return h * (p - p.conj());
}

/// Holomorphic monomial z^a w^m; weighted degree |a| + 2m.
struct HMono {
    std::vector<int> a;
    int m = 0;
    int weight() const { return std::accumulate(a.begin(), a.end(), 0) + 2 * m; }
    friend auto operator<=>(const HMono&, const HMono&) = default;
};

/// Holomorphic polynomial in (z_1..z_n, w).
class HoloPoly {
  public:
    HoloPoly() : n_(0) {}
    explicit HoloPoly(int n) : n_(n) {}

    static HoloPoly constant(int n, CRational c) {
        HoloPoly p(n);
        p.add_term(HMono{std::vector<int>(n, 0), 0}, std::move(c));
        return p;
    }
    static HoloPoly var_z(int n, int j) {
        HoloPoly p(n);
        HMono m{std::vector<int>(n, 0), 0};
        m.a[j] = 1;
        p.add_term(m, CRational(1));
        return p;
    }
    static HoloPoly var_w(int n) {
        HoloPoly p(n);
        p.add_term(HMono{std::vector<int>(n, 0), 1}, CRational(1));
        return p;
    }

    int nvars() const { return n_; }
    bool is_zero() const { return t_.empty(); }
    const std::map<HMono, CRational>& terms() const { return t_; }

    CRational coeff(const HMono& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? CRational() : it->second;
    }

    void add_term(const HMono& m, const CRational& c) {
        assert((int)m.a.size() == n_);
        if (c.is_zero()) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    HoloPoly& operator+=(const HoloPoly& o) {
        for (const auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    HoloPoly operator-() const {
        HoloPoly r(n_);
        for (const auto& [m, c] : t_) r.t_.emplace(m, -c);
        return r;
    }
    HoloPoly& operator-=(const HoloPoly& o) { return *this += -o; }
    friend HoloPoly operator+(HoloPoly a, const HoloPoly& b) { return a += b; }
    friend HoloPoly operator-(HoloPoly a, const HoloPoly& b) { return a -= b; }
    friend HoloPoly operator*(const CRational& c, const HoloPoly& p) {
        HoloPoly r(p.n_);
        if (c.is_zero()) return r;
        for (const auto& [m, v] : p.t_) r.t_.emplace(m, c * v);
        return r;
    }
    friend HoloPoly operator*(const HoloPoly& a, const HoloPoly& b) {
        HoloPoly r(a.n_);
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) {
                HMono m = ma;
                for (int j = 0; j < a.n_; ++j) m.a[j] += mb.a[j];
                m.m += mb.m;
                r.add_term(m, ca * cb);
            }
        return r;
    }

    HoloPoly weighted_component(int d) const {
        HoloPoly r(n_);
        for (const auto& [m, c] : t_)
            if (m.weight() == d) r.t_.emplace(m, c);
        return r;
    }
    HoloPoly truncate_weight(int maxw) const {
        HoloPoly r(n_);
        for (const auto& [m, c] : t_)
            if (m.weight() <= maxw) r.t_.emplace(m, c);
        return r;
    }
    int min_weight() const {
        int w = -1;
        for (const auto& [m, c] : t_) {
            int mw = m.weight();
            if (w < 0 || mw < w) w = mw;
        }
        return w;
    }

    /// Evaluate with w replaced by a (z, zbar, u)-polynomial; z_j stay z_j.
    Poly on_substitution(const Poly& W, int maxw) const {
        int m = W.nvars();
        std::vector<Poly> wpow{Poly::constant(m, CRational(1))};
        Poly out(m);
        for (const auto& [mo, c] : t_) {
            while ((int)wpow.size() <= mo.m)
                wpow.push_back(Poly::mul_trunc(wpow.back(), W, maxw));
            Poly term = c * wpow[mo.m];
            Mono zm{mo.a, std::vector<int>(m, 0), 0};
            Poly zp(m);
            zp.add_term(zm, CRational(1));
            out += Poly::mul_trunc(term, zp, maxw);
        }
        return out;
    }

    /// Jet composition: substitute z_j -> zs[j], w -> ws (all holomorphic),
    /// truncated to weighted degree <= maxw.
    HoloPoly compose(const std::vector<HoloPoly>& zs, const HoloPoly& ws, int maxw) const {
        assert((int)zs.size() == n_);
        int m = ws.nvars();
        auto mul_tr = [maxw](const HoloPoly& x, const HoloPoly& y) {
            HoloPoly r(x.nvars());
            for (const auto& [ma, ca] : x.terms()) {
                if (maxw >= 0 && ma.weight() > maxw) continue;
                for (const auto& [mb, cb] : y.terms()) {
                    if (maxw >= 0 && ma.weight() + mb.weight() > maxw) continue;
                    HMono mm = ma;
                    for (int j = 0; j < x.nvars(); ++j) mm.a[j] += mb.a[j];
                    mm.m += mb.m;
                    r.add_term(mm, ca * cb);
                }
            }
            return r;
        };
        std::vector<std::vector<HoloPoly>> pz(n_);
        std::vector<HoloPoly> pwc;
        auto pw = [&](std::vector<HoloPoly>& cache, const HoloPoly& base, int e) -> const HoloPoly& {
            if (cache.empty()) cache.push_back(HoloPoly::constant(m, CRational(1)));
            while ((int)cache.size() <= e) cache.push_back(mul_tr(cache.back(), base));
            return cache[e];
        };
        HoloPoly out(m);
        for (const auto& [mo, c] : t_) {
            HoloPoly term = HoloPoly::constant(m, c);
            for (int j = 0; j < n_ && !term.is_zero(); ++j)
                if (mo.a[j]) term = mul_tr(term, pw(pz[j], zs[j], mo.a[j]));
            if (mo.m && !term.is_zero()) term = mul_tr(term, pw(pwc, ws, mo.m));
            out += term;
        }
        return out;
    }

    friend bool operator==(const HoloPoly& a, const HoloPoly& b) {
        return a.n_ == b.n_ && a.t_ == b.t_;
    }

  private:
    int n_;
    std::map<HMono, CRational> t_;
};

}  // namespace cmw

#endif  // CMW_POLY_HPP_
