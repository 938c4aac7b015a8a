// Concrete hypersurface families and their Segre geometry: the model
// hyperquadric, a projective quartic perturbation of the generalized
// sphere, the Kohn-Nirenberg-type deformation, Segre varieties, and the
// interior-witness search on them.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hermitian.hpp"
#include "normalform.hpp"

namespace cmw {

struct AlgebraicHypersurface {
    int N;    // ambient complex dimension
    Poly rho; // real polynomial in (Z, Z-bar), no u variable

    AlgebraicHypersurface(int amb, Poly r) : N(amb), rho(std::move(r)) {
        if (rho.nvars() != N)
            throw std::invalid_argument("hypersurface: variable count mismatch");
        if (!rho.is_real())
            throw std::invalid_argument("hypersurface: defining polynomial not real");
        bool nonconstant = false;
        for (const auto& [m, c] : rho.terms())
            nonconstant = nonconstant || m.degree() > 0;
        if (!nonconstant)
            throw std::invalid_argument("hypersurface: defining polynomial constant");
    }
};

namespace detail {

inline Mono plain_mono(int n, std::vector<int> a, std::vector<int> b) {
    (void)n;
    return Mono{std::move(a), std::move(b), 0};
}

// z_j z-bar_j as a polynomial in N variables
inline Poly abs_sq(int N, int j) {
    Poly p(N);
    std::vector<int> a(N, 0), b(N, 0);
    a[j] = 1;
    b[j] = 1;
    p.add_term(Mono{a, b, 0}, CRational(1));
    return p;
}

} // namespace detail

/// Model defining polynomial Im w - |z|^2_l in n+1 ambient variables
/// (z_0, ..., z_{n-1}, w).
inline AlgebraicHypersurface hyperquadric(const Signature& sig) {
    int N = sig.n + 1;
    Poly rho(N);
    // Im w = -(i/2) w + (i/2) w-bar
    std::vector<int> aw(N, 0), bw(N, 0);
    aw[N - 1] = 1;
    bw[N - 1] = 1;
    rho.add_term(Mono{aw, std::vector<int>(N, 0), 0}, CRational(Rat(0), Rat(-1, 2)));
    rho.add_term(Mono{std::vector<int>(N, 0), bw, 0}, CRational(Rat(0), Rat(1, 2)));
    for (int j = 0; j < sig.n; ++j) {
        Poly t = detail::abs_sq(N, j);
        rho = sig.delta(j) == 1 ? rho - t : rho + t;
    }
    return {N, rho};
}

/// Ambient defining polynomial Im w - |z|^2_l + H(z, z-bar, Re w) of a
/// graph-form hypersurface with tail H (a real polynomial in n variables
/// and u, of weight >= 3).
inline AlgebraicHypersurface ambient_from_tail(const Poly& H, const Signature& sig) {
    int n = sig.n;
    validate_prenormal(H, sig);
    AlgebraicHypersurface model = hyperquadric(sig);
    int N = n + 1;
    // substitute u -> (w + w-bar)/2; z variables pass through
    std::vector<Poly> zs, zbs;
    for (int j = 0; j < n; ++j) {
        zs.push_back(Poly::var_z(N, j));
        zbs.push_back(Poly::var_zbar(N, j));
    }
    Poly half_w = CRational(Rat(1, 2)) * (Poly::var_z(N, N - 1) + Poly::var_zbar(N, N - 1));
    Poly Hamb = H.substitute(zs, zbs, half_w, 1 << 20);
    return {N, model.rho + Hamb};
}

/// Inverse of ambient_from_tail: checks that rho has the exact shape
/// Im w - |z|^2_l + H(z, z-bar, Re w) and returns the tail H as a
/// polynomial in (z, u).
inline Poly graph_tail(const AlgebraicHypersurface& M, const Signature& sig) {
    int n = sig.n;
    if (M.N != n + 1) throw std::invalid_argument("graph_tail: dimension mismatch");
    // restrict to w = w-bar = u: Im w drops, Re w becomes u
    std::vector<Poly> zs, zbs;
    for (int j = 0; j < n; ++j) {
        zs.push_back(Poly::var_z(n, j));
        zbs.push_back(Poly::var_zbar(n, j));
    }
    zs.push_back(Poly::var_u(n));
    zbs.push_back(Poly::var_u(n));
    Poly restricted = M.rho.substitute(zs, zbs, Poly(n), 1 << 20);
    Poly H = restricted + norm_sq_poly(sig);
    if (!(ambient_from_tail(H, sig).rho == M.rho))
        throw std::invalid_argument("graph_tail: polynomial is not in graph form");
    return H;
}

struct SpherePerturbation {
    Signature sig;
    AlgebraicHypersurface surface; // ambient pre-normal defining polynomial
    Poly tail;                     // graph tail H, weighted degree <= 4
    Rat a;                         // tensor takes -a at X1 = e_1 + e_{l+1},
                                   // +a at X2 = e_2 + e_{l+2} (1-based)
};

/// Affine-chart equation of the projective quartic perturbation of the
/// generalized sphere: substitutes the chart
///   xi_0 = 1, xi_{l+1} = (1 - sigma)/(1 + sigma), xi_other = eta/(1 + sigma)
/// into |xi|^2 <xi, xi-bar>_{l+1} + eps (|xi_1|^4 - |xi_{n+1}|^4), clears
/// |1 + sigma|^4, rescales sigma = -i w / 4, and solves for the graph tail
/// to weighted degree 4.
inline SpherePerturbation sphere_perturbation_local(int n, int ell, const Rat& eps_in) {
    Rat eps = canonical(eps_in);
    Signature sig{n, ell};
    if (ell < 2 || 2 * ell > n)
        throw std::invalid_argument("sphere_perturbation_local: need 2 <= l <= n/2");
    if (eps < 0 || eps >= 1)
        throw std::invalid_argument("sphere_perturbation_local: need 0 <= eps < 1");

    // cleared-denominator chart equation with sigma = -i w / 4, w = u + i v:
    //   (2 + (u^2 + v^2)/8 + E) (K - v) + eps D = 0,
    // E = sum |eta_j|^2, K = |eta|^2_l, D = |eta_1|^4 - |eta_n|^4.
    Poly E(n), D(n);
    for (int j = 0; j < n; ++j) E += detail::abs_sq(n, j);
    Poly K = norm_sq_poly(sig);
    {
        std::vector<int> e0(n, 0), en(n, 0);
        e0[0] = 2;
        en[n - 1] = 2;
        D.add_term(Mono{e0, e0, 0}, CRational(1));
        D.add_term(Mono{en, en, 0}, CRational(-1));
    }
    Poly u = Poly::var_u(n);

    // graph form v = K - H: the equation becomes
    //   H = -eps D / (2 + (u^2 + (K - H)^2)/8 + E),
    // solved as a fixed point in the weight filtration, truncated at 4
    const int maxw = 4;
    auto denominator = [&](const Poly& H) {
        Poly v = K - H;
        return Poly::constant(n, CRational(2)) + E +
               CRational(Rat(1, 8)) * (Poly::mul_trunc(u, u, maxw) + Poly::mul_trunc(v, v, maxw));
    };
    auto inverse_series = [&](const Poly& P) {
        // P has nonzero constant term; Newton iteration for 1/P
        CRational c0 = P.coeff(Mono{std::vector<int>(n, 0), std::vector<int>(n, 0), 0});
        Poly X = Poly::constant(n, CRational(1) / c0);
        for (int it = 0; it < 4; ++it) {
            Poly two_minus = CRational(2) * X - Poly::mul_trunc(X, Poly::mul_trunc(P, X, maxw), maxw);
            if (two_minus == X) break;
            X = two_minus;
        }
        if (!(Poly::mul_trunc(P, X, maxw) == Poly::constant(n, CRational(1))))
            throw std::runtime_error("sphere_perturbation_local: series inversion failed");
        return X;
    };
    Poly H(n);
    for (int it = 0; it < 6; ++it) {
        Poly Hn = (CRational(-eps) * Poly::mul_trunc(D, inverse_series(denominator(H)), maxw))
                      .truncate_weight(maxw);
        if (Hn == H) break;
        H = Hn;
        if (it == 5)
            throw std::runtime_error("sphere_perturbation_local: graph solve diverged");
    }
    if (!H.is_real())
        throw std::runtime_error("sphere_perturbation_local: tail not real");

    AlgebraicHypersurface amb = ambient_from_tail(H, sig);
    LeviReport levi = levi_form(amb.rho, std::vector<CRational>(amb.N));
    if (levi.zero > 0)
        throw std::domain_error("sphere_perturbation_local: Levi-degenerate at origin");

    // normal-form tensor value at e_2 + e_{l+2}: 4 x the tail coefficient of
    // |eta_n|^4 (the trace correction vanishes on null vectors)
    std::vector<int> en(n, 0);
    en[n - 1] = 2;
    CRational an = CRational(4) * H.coeff(Mono{en, en, 0});
    if (!(an.im == 0))
        throw std::runtime_error("sphere_perturbation_local: coefficient not real");
    return {sig, amb, H, an.re};
}

struct KNParams {
    Rat eps0 = Rat(1, 1000);
    Rat c = Rat(21, 10);
    Rat eps = Rat(1, 10000);

    KNParams canonicalized() const {
        return {canonical(eps0), canonical(c), canonical(eps)};
    }

    void validate() const {
        if (!(eps0 > 0)) throw std::invalid_argument("kohn-nirenberg: need eps0 > 0");
        if (!(c > 2 && c < Rat(16, 7)))
            throw std::invalid_argument("kohn-nirenberg: need 2 < c < 16/7");
        if (!(eps > 0 && eps < 1))
            throw std::invalid_argument("kohn-nirenberg: need 0 < eps < 1");
    }
};

/// eps0 (|z|^8 + c Re(|z|^2 z^6)) + |w|^2 + |z|^10 + eps |z|^2 - 1
/// in ambient variables (z, w).
inline AlgebraicHypersurface kohn_nirenberg_rho(const KNParams& params) {
    KNParams p = params.canonicalized();
    p.validate();
    int N = 2;
    auto zmono = [](int az, int bz) {
        return Mono{{az, 0}, {bz, 0}, 0};
    };
    Poly rho(N);
    rho.add_term(zmono(4, 4), CRational(p.eps0));                 // eps0 |z|^8
    rho.add_term(zmono(7, 1), CRational(p.eps0 * p.c / 2));      // eps0 c Re(|z|^2 z^6)
    rho.add_term(zmono(1, 7), CRational(p.eps0 * p.c / 2));
    rho.add_term(Mono{{0, 1}, {0, 1}, 0}, CRational(1));          // |w|^2
    rho.add_term(zmono(5, 5), CRational(1));                      // |z|^10
    rho.add_term(zmono(1, 1), CRational(p.eps));                  // eps |z|^2
    rho.add_term(zmono(0, 0), CRational(-1));                     // -1
    return {N, rho};
}

struct SegreVariety {
    std::vector<CRational> p; // base point
    Poly Q;                   // holomorphic defining polynomial rho(Z, p-bar)
    bool degenerate = false;  // identically zero result
};

/// Substitute Z-bar := p-bar into rho.
inline SegreVariety segre_variety(const AlgebraicHypersurface& M,
                                  const std::vector<CRational>& p) {
    int N = M.N;
    if ((int)p.size() != N) throw std::invalid_argument("segre_variety: point dimension");
    std::vector<Poly> zs, zbs;
    for (int j = 0; j < N; ++j) {
        zs.push_back(Poly::var_z(N, j));
        zbs.push_back(Poly::constant(N, p[j].conj()));
    }
    Poly Q = M.rho.substitute(zs, zbs, Poly(N), 1 << 20);
    return {p, Q, Q.is_zero()};
}

struct SegreWitness {
    bool found = false;
    std::string message;        // set when not found
    std::vector<CRational> p0;  // base point (0, 1)
    Rat lambda_prime_sq;        // t = lambda'^2 = eps0 (c - 1) / 2
    Rat eps_tilde;              // largest 1/2^k with phi(lambda', 1/2^k) < 0
    Rat phi_value;              // phi(lambda', eps) = psi(mu0, eps)
    Rat rho_at_witness;         // rho_eps(mu0, 1), equals phi_value
    Rat segre_membership;       // Q_{p0} polynomial evaluated at the witness
};

/// Interior-witness search on the Segre variety Q_{p0} of the
/// Kohn-Nirenberg-type surface at p0 = (0, 1). The witness is
/// q = (mu0, 1) with mu0 = lambda' e^{i pi/6}; only the rational quantity
/// t = lambda'^2 enters the arithmetic, via
///   phi(lambda', eps) = eps0 t^4 (1 - c) + t^5 + eps t
/// and Re(|mu0|^2 mu0^6) = -lambda'^8 = -t^4.
inline SegreWitness segre_interior_witness(const KNParams& params) {
    KNParams p = params.canonicalized();
    p.validate();
    SegreWitness w;
    w.p0 = {CRational(0), CRational(1)};
    Rat t = p.eps0 * (p.c - 1) / 2;
    w.lambda_prime_sq = t;
    auto phi = [&](const Rat& eps) -> Rat {
        Rat t4 = t * t * t * t;
        return p.eps0 * t4 * (1 - p.c) + t4 * t + eps * t;
    };
    if (!(phi(0) < 0))
        throw std::runtime_error("segre_interior_witness: phi(lambda', 0) >= 0");
    Rat et(1);
    int k = 0;
    while (!(phi(et) < 0)) {
        et /= 2;
        if (++k > 4096)
            throw std::runtime_error("segre_interior_witness: eps-tilde search failed");
    }
    w.eps_tilde = et;
    if (p.eps > et) {
        w.found = false;
        w.message = "no witness at this eps by this construction";
        return w;
    }
    w.phi_value = phi(p.eps);

    // rho_eps(mu0, 1): |mu0|^8 = t^4, Re(|mu0|^2 mu0^6) = -t^4,
    // |mu0|^10 = t^5, |mu0|^2 = t, |w|^2 = 1
    Rat t4 = t * t * t * t;
    w.rho_at_witness = p.eps0 * (t4 - p.c * t4) + Rat(1) + t4 * t + p.eps * t - 1;
    if (!(w.rho_at_witness == w.phi_value))
        throw std::runtime_error("segre_interior_witness: psi/phi identity failed");
    if (!(w.rho_at_witness < 0))
        throw std::runtime_error("segre_interior_witness: witness not interior");

    // Segre membership: Q_{p0} must not involve z, and must vanish at w = 1
    SegreVariety Q = segre_variety(kohn_nirenberg_rho(p), w.p0);
    for (const auto& [m, c] : Q.Q.terms())
        if (m.a[0] != 0 || m.b[0] != 0 || m.b[1] != 0 || m.k != 0)
            throw std::runtime_error("segre_interior_witness: unexpected Segre equation");
    CRational val = Q.Q.eval({CRational(0), CRational(1)}, CRational(0));
    if (!val.is_zero())
        throw std::runtime_error("segre_interior_witness: witness not on Segre variety");
    w.segre_membership = val.re;
    w.found = true;
    return w;
}

struct PseudoconvexityReport {
    int samples = 0;
    double min_eigenvalue = 0.0;
    bool all_positive = false;
};

/// Samples points of { rho = 0 } by exact bisection along random real rays
/// from an interior anchor, then evaluates the Levi form (exact restricted
/// Hessian, floating-point inertia with the given tolerance).
inline PseudoconvexityReport pseudoconvexity_scan(const AlgebraicHypersurface& M,
                                                  int m, double tol = 1e-9,
                                                  std::uint64_t seed = 2024) {
    int N = M.N;
    std::vector<CRational> anchor(N);
    CRational at_anchor = M.rho.eval(anchor, CRational(0));
    if (!(at_anchor.im == 0) || !(at_anchor.re < 0))
        throw std::domain_error("pseudoconvexity_scan: origin is not interior");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(-8, 8);
    PseudoconvexityReport rep;
    rep.all_positive = true;
    int produced = 0;
    for (int attempt = 0; attempt < 20 * m && produced < m; ++attempt) {
        std::vector<CRational> dir(N);
        bool nonzero = false;
        for (auto& c : dir) {
            c = CRational(Rat(d(rng)), Rat(d(rng)));
            nonzero = nonzero || !c.is_zero();
        }
        if (!nonzero) continue;
        auto along = [&](const Rat& s) {
            std::vector<CRational> pt(N);
            for (int j = 0; j < N; ++j) pt[j] = CRational(s) * dir[j];
            return pt;
        };
        auto value = [&](const Rat& s) { return M.rho.eval(along(s), CRational(0)).re; };
        Rat lo(0), hi(1);
        int guard = 0;
        while (!(value(hi) > 0)) {
            if (value(hi) == 0) break;
            hi *= 2;
            if (++guard > 64) break;
        }
        if (guard > 64) continue; // ray stays interior (should not happen here)
        for (int it = 0; it < 60; ++it) {
            Rat mid = (lo + hi) / 2;
            Rat v = value(mid);
            if (v == 0) {
                lo = hi = mid;
                break;
            }
            (v < 0 ? lo : hi) = mid;
        }
        std::vector<CRational> pt = along((lo + hi) / 2);
        LeviReport levi;
        try {
            levi = levi_form(M.rho, pt, tol);
        } catch (const std::domain_error&) {
            continue; // singular sample; try another ray
        }
        ++produced;
        if (produced == 1 || levi.min_eigenvalue < rep.min_eigenvalue)
            rep.min_eigenvalue = levi.min_eigenvalue;
        rep.all_positive = rep.all_positive && levi.negative == 0 && levi.zero == 0;
    }
    if (produced < m)
        throw std::runtime_error("pseudoconvexity_scan: sampling failure");
    rep.samples = produced;
    return rep;
}

} // namespace cmw
