// Signature-graded Hermitian algebra: the indefinite inner product, the
// associated Laplacian, null cone sampling, Fischer decomposition of (2,2)
// forms and Levi form inertia.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "linalg.hpp"
#include "poly.hpp"

namespace cmw {

struct Signature {
    int n;   // CR dimension
    int ell; // number of negative Levi eigenvalues, 0 <= ell <= n/2

    Signature(int n_, int ell_) : n(n_), ell(ell_) {
        if (n < 1) throw std::invalid_argument("signature: n must be >= 1");
        if (ell < 0 || 2 * ell > n)
            throw std::invalid_argument("signature: need 0 <= ell <= n/2");
    }
    // +1 for indices past the negative block, -1 inside it (0-based j).
    int delta(int j) const { return j < ell ? -1 : 1; }
};

/// <a,b>_l = sum_j delta_j a_j conj(b_j).
inline CRational inner_l(const std::vector<CRational>& a,
                         const std::vector<CRational>& b, const Signature& sig) {
    if ((int)a.size() != sig.n || (int)b.size() != sig.n)
        throw std::invalid_argument("inner_l: dimension mismatch");
    CRational s;
    for (int j = 0; j < sig.n; ++j) {
        CRational t = a[j] * b[j].conj();
        s = sig.delta(j) == 1 ? s + t : s - t;
    }
    return s;
}

/// |z|^2_l as a polynomial.
inline Poly norm_sq_poly(const Signature& sig) {
    Poly p(sig.n);
    for (int j = 0; j < sig.n; ++j) {
        Mono m;
        m.a.assign(sig.n, 0);
        m.b.assign(sig.n, 0);
        m.k = 0;
        m.a[j] = 1;
        m.b[j] = 1;
        p.add_term(m, CRational(Rat(sig.delta(j))));
    }
    return p;
}

/// Delta_l = sum_j delta_j d^2/dz_j dzbar_j.
inline Poly laplacian_l(const Poly& p, const Signature& sig) {
    if (p.nvars() != sig.n) throw std::invalid_argument("laplacian_l: dimension");
    Poly r(sig.n);
    for (int j = 0; j < sig.n; ++j) {
        Poly d = p.derivative_z(j).derivative_zbar(j);
        r = sig.delta(j) == 1 ? r + d : r - d;
    }
    return r;
}

/// diag(delta_0, ..., delta_{n-1}).
inline CMatrix standard_form(const Signature& sig) {
    CMatrix g(sig.n, sig.n);
    for (int j = 0; j < sig.n; ++j) g(j, j) = CRational(Rat(sig.delta(j)));
    return g;
}

namespace detail {

inline Rat rand_rat(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-5, 5);
    return Rat(num(rng));
}

inline CRational rand_crat(std::mt19937_64& rng) {
    CRational c;
    c.re = rand_rat(rng);
    c.im = rand_rat(rng);
    return c;
}

} // namespace detail

/// Exact null vectors of <.,.>_l: a fixed base point plus rational points
/// obtained by intersecting random lines through it with the cone.
/// Requires ell >= 1 (otherwise the cone is trivial).
inline std::vector<std::vector<CRational>>
null_cone_samples(const Signature& sig, int count, std::uint64_t seed) {
    if (sig.ell < 1)
        throw std::invalid_argument("null_cone_samples: definite form has trivial cone");
    std::vector<std::vector<CRational>> out;
    std::mt19937_64 rng(seed);

    auto base = [&](int i, int j, const CRational& phase) {
        std::vector<CRational> v(sig.n);
        v[i] = CRational(1);
        v[j] = phase;
        return v;
    };
    // canonical seeds: e_i + phase * e_j across the two blocks
    static const int phases_re[4] = {1, 0, -1, 0};
    static const int phases_im[4] = {0, 1, 0, -1};
    for (int i = 0; i < sig.ell && (int)out.size() < count; ++i)
        for (int j = sig.ell; j < sig.n && (int)out.size() < count; ++j)
            for (int ph = 0; ph < 4 && (int)out.size() < count; ++ph) {
                CRational phase;
                phase.re = Rat(phases_re[ph]);
                phase.im = Rat(phases_im[ph]);
                out.push_back(base(i, j, phase));
            }

    std::vector<CRational> v0(sig.n);
    v0[0] = CRational(1);
    v0[sig.ell] = CRational(1);
    int guard = 0;
    while ((int)out.size() < count) {
        if (++guard > 100000)
            throw std::runtime_error("null_cone_samples: sampling stalled");
        std::vector<CRational> d(sig.n);
        bool nz = false;
        for (int j = 0; j < sig.n; ++j) {
            d[j] = detail::rand_crat(rng);
            nz = nz || !d[j].is_zero();
        }
        if (!nz) continue;
        CRational qd = inner_l(d, d, sig);       // real
        CRational bd = inner_l(v0, d, sig);      // B(v0,d) = Re of this
        Rat b2 = bd.re * 2;
        if (qd.is_zero()) {
            if (b2 == 0) {
                out.push_back(d); // d itself lies on the cone
                continue;
            }
            continue;
        }
        if (b2 == 0) continue;
        Rat t = -b2 / qd.re; // t = -2 B(v0,d) / Q(d)
        std::vector<CRational> v = v0;
        for (int j = 0; j < sig.n; ++j) {
            CRational td;
            td.re = t * d[j].re;
            td.im = t * d[j].im;
            v[j] = v[j] + td;
        }
        if (!inner_l(v, v, sig).is_zero())
            throw std::runtime_error("null_cone_samples: lost exactness");
        out.push_back(std::move(v));
    }
    return out;
}

namespace detail {

// index of the pair (j,k), j,k in [0,n), in row-major order
inline int pair_index(int j, int k, int n) { return j * n + k; }

inline Mono mono_zzb(int n, int j, int k) {
    Mono m;
    m.a.assign(n, 0);
    m.b.assign(n, 0);
    m.k = 0;
    m.a[j] += 1;
    m.b[k] += 1;
    return m;
}

} // namespace detail

struct FischerSplit {
    Poly harmonic; // N with Delta_l N = 0
    Poly trace;    // A, an (1,1) form; input = N + A * |z|^2_l
};

/// Decompose a (2,2) form Q as Q = N + A |z|^2_l with Delta_l N = 0.
/// The decomposition is unique; A is Hermitian whenever Q is real.
inline FischerSplit fischer_split_22(const Poly& q, const Signature& sig) {
    int n = sig.n;
    for (const auto& [m, c] : q.terms()) {
        (void)c;
        if (m.k != 0 || m.za() != 2 || m.zb() != 2)
            throw std::invalid_argument("fischer_split_22: input must be pure (2,2)");
    }
    Poly L = norm_sq_poly(sig);
    // unknowns: a_{jk}, coefficient of z_j zbar_k in A
    CMatrix M(n * n, n * n);
    std::vector<CRational> rhs(n * n);
    Poly lq = laplacian_l(q, sig);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Poly basis(n);
            basis.add_term(detail::mono_zzb(n, j, k), CRational(1));
            Poly lb = laplacian_l(basis * L, sig);
            for (int p = 0; p < n; ++p)
                for (int qq = 0; qq < n; ++qq)
                    M(detail::pair_index(p, qq, n), detail::pair_index(j, k, n)) =
                        lb.coeff(detail::mono_zzb(n, p, qq));
        }
    for (int p = 0; p < n; ++p)
        for (int qq = 0; qq < n; ++qq)
            rhs[detail::pair_index(p, qq, n)] = lq.coeff(detail::mono_zzb(n, p, qq));
    auto sol = M.solve(rhs);
    if (!sol) throw std::runtime_error("fischer_split_22: singular system");
    FischerSplit out{Poly(n), Poly(n)};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            CRational c = (*sol)[detail::pair_index(j, k, n)];
            if (!c.is_zero()) out.trace.add_term(detail::mono_zzb(n, j, k), c);
        }
    out.harmonic = q - out.trace * L;
    if (!laplacian_l(out.harmonic, sig).terms().empty())
        throw std::runtime_error("fischer_split_22: residual not harmonic");
    return out;
}

/// Same split, exposed under the name used by the normalization stage.
inline FischerSplit harmonic_residual_split(const Poly& q, const Signature& sig) {
    return fischer_split_22(q, sig);
}

/// Real basis of the trace-free (Delta_l-harmonic) real (2,2) forms.
/// Dimension is N^2 - n^2 with N = n(n+1)/2.
inline std::vector<Poly> harmonic_22_basis(const Signature& sig) {
    int n = sig.n;
    // degree-2 multi-indices
    std::vector<std::pair<int, int>> deg2;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) deg2.emplace_back(i, j);
    int N = (int)deg2.size();

    auto mono22 = [&](int A, int B) {
        Mono m;
        m.a.assign(n, 0);
        m.b.assign(n, 0);
        m.k = 0;
        m.a[deg2[A].first] += 1;
        m.a[deg2[A].second] += 1;
        m.b[deg2[B].first] += 1;
        m.b[deg2[B].second] += 1;
        return m;
    };

    // real basis of real (2,2) space: symmetric and antisymmetric pairings
    std::vector<Poly> reals;
    for (int A = 0; A < N; ++A)
        for (int B = A; B < N; ++B) {
            Poly p(n);
            p.add_term(mono22(A, B), CRational(1));
            if (B != A) p.add_term(mono22(B, A), CRational(1));
            reals.push_back(p);
            if (B != A) {
                Poly q(n);
                q.add_term(mono22(A, B), CRational::i());
                q.add_term(mono22(B, A), -CRational::i());
                reals.push_back(q);
            }
        }
    // real coordinates of a real (1,1) form: Re/Im of coeff(z_j zbar_k), j<=k
    auto coords11 = [&](const Poly& p) {
        std::vector<CRational> v;
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                CRational c = p.coeff(detail::mono_zzb(n, j, k));
                CRational re, im;
                re.re = c.re;
                v.push_back(re);
                if (k != j) {
                    im.re = c.im;
                    v.push_back(im);
                }
            }
        return v;
    };
    std::size_t rows = coords11(Poly(n)).size();
    CMatrix M(rows, reals.size());
    for (std::size_t c = 0; c < reals.size(); ++c) {
        auto col = coords11(laplacian_l(reals[c], sig));
        for (std::size_t r = 0; r < rows; ++r) M(r, c) = col[r];
    }
    std::vector<Poly> basis;
    for (const auto& vec : M.nullspace()) {
        Poly p(n);
        for (std::size_t c = 0; c < reals.size(); ++c)
            if (!vec[c].is_zero()) p = p + CRational(vec[c].re) * reals[c];
        basis.push_back(std::move(p));
    }
    return basis;
}

/// Restrict a holomorphic polynomial in (z, w) to the model Im w = |z|^2_l,
/// i.e. substitute w = u + i |z|^2_l. Result is complex valued in general;
/// combine with re_part / im_part as needed.
inline Poly model_restrict(const HoloPoly& h, const Signature& sig, int maxw = 8) {
    Poly W = Poly::var_u(sig.n) + CRational::i() * norm_sq_poly(sig);
    return h.on_substitution(W, maxw);
}

struct LeviReport {
    CMatrix form; // exact restricted complex Hessian, (N-1) x (N-1)
    int negative = 0;
    int positive = 0;
    int zero = 0;
    double min_eigenvalue = 0.0;
};

/// Levi form of { rho = 0 } at a point p where d rho != 0.
/// The restricted Hessian is exact; only the inertia count uses floating
/// point, with eigenvalues below tol * max(1, |lambda|_max) treated as zero.
inline LeviReport levi_form(const Poly& rho, const std::vector<CRational>& p,
                            double tol = 1e-9) {
    int N = rho.nvars();
    if ((int)p.size() != N) throw std::invalid_argument("levi_form: point dimension");
    CRational u0; // ambient polynomials carry no u variable
    std::vector<CRational> grad(N);
    int pivot = -1;
    for (int j = 0; j < N; ++j) {
        grad[j] = rho.derivative_z(j).eval(p, u0);
        if (pivot < 0 && !grad[j].is_zero()) pivot = j;
    }
    if (pivot < 0) throw std::domain_error("levi_form: d rho vanishes at point");

    CMatrix H(N, N);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
            H(j, k) = rho.derivative_z(j).derivative_zbar(k).eval(p, u0);

    // basis of the complex tangent space: e_k - (g_k/g_pivot) e_pivot
    CMatrix B(N, N - 1);
    int col = 0;
    for (int k = 0; k < N; ++k) {
        if (k == pivot) continue;
        B(k, col) = CRational(1);
        B(pivot, col) = -(grad[k] / grad[pivot]);
        ++col;
    }
    CMatrix R = B.transpose() * H * B.conj_transpose().transpose();

    LeviReport rep{R, 0, 0, 0, 0.0};
    Eigen::MatrixXcd Rd(N - 1, N - 1);
    for (int a = 0; a < N - 1; ++a)
        for (int b = 0; b < N - 1; ++b)
            Rd(a, b) = std::complex<double>(R(a, b).re.get_d(), R(a, b).im.get_d());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Rd);
    const auto& ev = es.eigenvalues();
    double mx = 1.0;
    for (int a = 0; a < ev.size(); ++a) mx = std::max(mx, std::abs(ev[a]));
    double cut = tol * mx;
    rep.min_eigenvalue = ev.size() ? ev[0] : 0.0;
    for (int a = 0; a < ev.size(); ++a) {
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, ev[a]);
        if (ev[a] > cut)
            ++rep.positive;
        else if (ev[a] < -cut)
            ++rep.negative;
        else
            ++rep.zero;
    }
    return rep;
}

} // namespace cmw
