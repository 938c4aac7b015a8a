// Fourth-order normalization of a Levi non-degenerate graph
//   M : v = |z|^2_l - H(z, zbar, u),   H = O_wt(3),
// producing the normalizing jet and the trace-free quartic s with
//   v = |z|^2_l - (1/4) s(z, zbar) - R,   R = o_wt(4) and o(|(z,u)|^4).
#pragma once

#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hermitian.hpp"
#include "linalg.hpp"
#include "poly.hpp"

namespace cmw {

constexpr int kMaxWeight = 8; // truncation order of the whole pipeline

struct HoloJet {
    Signature sig;
    std::vector<HoloPoly> f; // n components in (z, w)
    HoloPoly g;

    static HoloJet identity(const Signature& sig) {
        HoloJet j{sig, {}, HoloPoly::var_w(sig.n)};
        for (int k = 0; k < sig.n; ++k) j.f.push_back(HoloPoly::var_z(sig.n, k));
        return j;
    }

    bool linear_part_is_identity() const {
        for (int k = 0; k < sig.n; ++k) {
            HoloPoly d = f[k] - HoloPoly::var_z(sig.n, k);
            if (!d.is_zero() && d.min_weight() < 2) return false;
        }
        HoloPoly dg = g - HoloPoly::var_w(sig.n);
        return dg.is_zero() || dg.min_weight() >= 3;
    }

    bool fixes_origin() const {
        HMono zero{std::vector<int>(sig.n, 0), 0};
        for (const auto& c : f)
            if (!c.coeff(zero).is_zero()) return false;
        return g.coeff(zero).is_zero();
    }

    /// this after first: (f, g) = (this.f, this.g) o (first.f, first.g)
    HoloJet after(const HoloJet& first) const {
        HoloJet out{sig, {}, g.compose(first.f, first.g, kMaxWeight)};
        for (const auto& c : f) out.f.push_back(c.compose(first.f, first.g, kMaxWeight));
        return out;
    }
};

/// Graph tail of the image surface: if M has graph function H and
/// (ztilde, wtilde) = (f, g)(z, w), the image satisfies
/// Im wtilde = |ztilde|^2_l - Htilde(ztilde, Re wtilde); returns Htilde,
/// truncated to weighted degree <= D. The jet must be tangent to the
/// identity in the graded sense.
/// With prune = true, terms of ordinary degree > 4 and weighted degree > 4
/// are dropped throughout. Substitution images never decrease either grading,
/// so the retained classes (everything of weighted degree <= 4, plus the
/// u-heavy terms of ordinary degree <= 4 the cleanup stage must see) are
/// computed exactly; only inert high-degree residue is discarded.
inline Poly compose_truncated(const Poly& H, const HoloJet& jet, int D,
                              bool prune = false) {
    if (D > kMaxWeight) throw std::invalid_argument("compose_truncated: D > 8");
    const Signature& sig = jet.sig;
    int n = sig.n;
    if (H.nvars() != n) throw std::invalid_argument("compose_truncated: dimension");
    if (!jet.linear_part_is_identity())
        throw std::invalid_argument("compose_truncated: jet linear part must be identity");

    auto low_degree = [](const Mono& m) { return m.degree() <= 4; };
    Poly L = norm_sq_poly(sig);
    Poly W = Poly::var_u(n) + CRational::i() * (L - H); // w on M
    if (prune) W = W.filter(low_degree);
    std::vector<Poly> fM(n), fMc(n);
    for (int j = 0; j < n; ++j) {
        fM[j] = jet.f[j].on_substitution(W, D);
        if (prune) fM[j] = fM[j].filter(low_degree);
        fMc[j] = fM[j].conj();
    }
    Poly gM = jet.g.on_substitution(W, D);
    if (prune) gM = gM.filter(low_degree);
    Poly A = -im_part(gM);
    for (int j = 0; j < n; ++j) {
        Poly t = Poly::mul_trunc(fM[j], fMc[j], D);
        A = sig.delta(j) == 1 ? A + t : A - t;
    }
    Poly reG = re_part(gM);
    auto keep = [](const Mono& m) { return m.weight() <= 4 || m.degree() <= 4; };
    if (prune) A = A.filter(keep);
    Poly Ht(n);
    Poly composed(n); // Ht o (fM, fMc, reG), maintained incrementally
    for (int d = 0; d <= D; ++d) {
        Poly piece = (A - composed).weighted_component(d);
        if (piece.is_zero()) continue;
        Ht += piece;
        Poly sub = piece.substitute(fM, fMc, reG, D);
        composed += prune ? sub.filter(keep) : sub;
    }
    if (!(A - composed).truncate_weight(D).is_zero())
        throw std::runtime_error("compose_truncated: graph solve failed");
    return Ht;
}

/// Pullback of the graph tail under the frame map (z, w) -> (lambda z U,
/// lambda^2 w): H'(z, u) = lambda^{-2} H(lambda z U, conj, lambda^2 u).
inline Poly precompose_frame(const Poly& H, const Rat& lambda, const CMatrix& U,
                             const Signature& sig) {
    int n = sig.n;
    std::vector<Poly> zs(n, Poly(n)), zbs(n);
    CRational lam(canonical(lambda));
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k)
            zs[j] += (lam * U(k, j)) * Poly::var_z(n, k); // (zU)_j = sum_k z_k U_kj
        zbs[j] = zs[j].conj();
    }
    Poly us = CRational(lambda * lambda) * Poly::var_u(n);
    Poly out = H.substitute(zs, zbs, us, kMaxWeight);
    return CRational(Rat(1) / (lambda * lambda)) * out;
}

/// Check that the input is pre-normalized: H real with no terms of weighted
/// degree <= 2 (the model part v - |z|^2_l is implicit in the convention).
inline void validate_prenormal(const Poly& H, const Signature& sig) {
    if (H.nvars() != sig.n) throw std::invalid_argument("validate_prenormal: dimension");
    if (!H.is_real()) throw std::invalid_argument("validate_prenormal: H is not real");
    for (int d = 0; d <= 2; ++d) {
        Poly p = H.weighted_component(d);
        if (!p.is_zero()) {
            std::ostringstream os;
            os << "validate_prenormal: nonzero weight-" << d << " part: " << p;
            throw std::invalid_argument(os.str());
        }
    }
}

namespace detail {

// all z-monomials of total degree d, deterministic order
inline void enum_monos(int n, int d, std::vector<std::vector<int>>& out,
                       std::vector<int>& cur, int pos, int left) {
    if (pos == n - 1) {
        cur[pos] = left;
        out.push_back(cur);
        return;
    }
    for (int e = left; e >= 0; --e) {
        cur[pos] = e;
        enum_monos(n, d, out, cur, pos + 1, left - e);
    }
}
inline std::vector<std::vector<int>> z_monomials(int n, int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n, 0);
    enum_monos(n, d, out, cur, 0, d);
    return out;
}

// representative monomial set covering a family of real polynomials
inline std::vector<Mono> real_reps(std::span<const Poly> ps) {
    std::set<Mono> reps;
    for (const auto& p : ps)
        for (const auto& [m, c] : p.terms()) {
            (void)c;
            Mono s = m.swapped();
            reps.insert(s < m ? s : m);
        }
    return {reps.begin(), reps.end()};
}

// real coordinates of a real polynomial over representative monomials:
// (Re, Im) of the coefficient at each rep, Im skipped on self-conjugate keys
inline std::vector<Rat> real_coords(const Poly& p, const std::vector<Mono>& reps) {
    std::vector<Rat> out;
    for (const auto& m : reps) {
        CRational c = p.coeff(m);
        out.push_back(c.re);
        if (!(m.swapped() == m)) out.push_back(c.im);
    }
    return out;
}

// one basis perturbation of a holomorphic jet component
struct JetUnknown {
    int fcomp;   // index of f component, or -1 for g
    HMono mono;  // perturbation monomial in (z, w)
    bool imag;   // perturb by i * mono instead of mono
};

// affine effect on the composed graph tail of a single perturbation, to
// first order: f_j += phi gives delta_j 2 Re(phi_M zbar_j); g += psi gives
// -Im(psi_M); all restricted to the model w = u + i |z|^2_l
inline Poly first_order_effect(const JetUnknown& uk, const Signature& sig, int D) {
    int n = sig.n;
    HoloPoly pert(n);
    pert.add_term(uk.mono, uk.imag ? CRational::i() : CRational(1));
    Poly W = Poly::var_u(n) + CRational::i() * norm_sq_poly(sig);
    Poly pM = pert.on_substitution(W, D);
    if (uk.fcomp < 0) return -im_part(pM);
    Poly zb = Poly::var_zbar(n, uk.fcomp);
    Poly eff = CRational(2) * re_part(Poly::mul_trunc(pM, zb, D));
    return sig.delta(uk.fcomp) == 1 ? eff : -eff;
}

// Solve sum_k x_k * effect(unknowns[k]) = -target over the rationals and
// return the jet carrying the solution. Effects and target are real
// polynomials; the system is expressed in real coordinates.
inline HoloJet solve_jet(const std::vector<JetUnknown>& unknowns, const Poly& target,
                         const Signature& sig, int weight, const char* stage) {
    std::vector<Poly> cols;
    cols.reserve(unknowns.size());
    for (const auto& uk : unknowns)
        cols.push_back(first_order_effect(uk, sig, weight).weighted_component(weight));
    std::vector<Poly> all = cols;
    all.push_back(target);
    auto reps = real_reps(all);
    CMatrix M(real_coords(target, reps).size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        auto v = real_coords(cols[c], reps);
        for (std::size_t r = 0; r < v.size(); ++r) M(r, c) = CRational(v[r]);
    }
    auto tv = real_coords(-target, reps);
    std::vector<CRational> rhs(tv.size());
    for (std::size_t r = 0; r < tv.size(); ++r) rhs[r] = CRational(tv[r]);
    auto sol = M.solve(rhs);
    if (!sol)
        throw std::runtime_error(std::string(stage) + ": matching system is inconsistent");
    HoloJet jet = HoloJet::identity(sig);
    for (std::size_t k = 0; k < unknowns.size(); ++k) {
        const CRational& x = (*sol)[k];
        if (x.is_zero()) continue;
        CRational coef = unknowns[k].imag ? x * CRational::i() : x;
        if (unknowns[k].fcomp < 0)
            jet.g.add_term(unknowns[k].mono, coef);
        else
            jet.f[unknowns[k].fcomp].add_term(unknowns[k].mono, coef);
    }
    return jet;
}

inline void push_both(std::vector<JetUnknown>& v, int fcomp, HMono m) {
    v.push_back({fcomp, m, false});
    v.push_back({fcomp, std::move(m), true});
}

// jet unknowns of a given weighted degree for an f component (>= 2) or for
// g (>= 3); holomorphic monomials z^a w^m with |a| + 2m = wt
inline void add_unknowns_of_weight(std::vector<JetUnknown>& v, int fcomp, int wt, int n,
                                   int max_degree = -1) {
    for (int m = 0; 2 * m <= wt; ++m) {
        int zdeg = wt - 2 * m;
        for (auto& a : z_monomials(n, zdeg)) {
            if (max_degree >= 0 && zdeg + m > max_degree) continue;
            push_both(v, fcomp, HMono{a, m});
        }
    }
}

} // namespace detail

struct Wt3Kill {
    HoloJet jet;
    Poly surface; // graph tail with vanishing weight-3 part
};

/// Remove every weighted degree-3 term by a jet with quadratic f and
/// weight-3 g, found by exact coefficient matching.
inline Wt3Kill kill_wt3(const Poly& H, const Signature& sig) {
    validate_prenormal(H, sig);
    int n = sig.n;
    Poly target = H.weighted_component(3);
    if (target.is_zero()) return {HoloJet::identity(sig), H};
    std::vector<detail::JetUnknown> unknowns;
    for (int j = 0; j < n; ++j) detail::add_unknowns_of_weight(unknowns, j, 2, n);
    detail::add_unknowns_of_weight(unknowns, -1, 3, n);
    HoloJet jet = detail::solve_jet(unknowns, target, sig, 3, "kill_wt3");
    Poly out = compose_truncated(H, jet, kMaxWeight, true);
    if (!out.weighted_component(3).is_zero())
        throw std::runtime_error("kill_wt3: weight-3 part survived");
    return {std::move(jet), std::move(out)};
}

struct Wt4Normalization {
    HoloJet jet;
    Poly s;       // trace-free quartic; surface weight-4 part is s/4
    Poly surface; // graph tail after the jet
};

/// Normalize the weighted degree-4 part: a jet with weight-3 f and
/// weight-4 g reduces it to a Delta_l-harmonic (2,2) form. Returns
/// s = 4 * (weight-4 part of the new graph tail).
inline Wt4Normalization normalize_wt4(const Poly& H3, const Signature& sig) {
    if (!H3.weighted_component(3).is_zero())
        throw std::invalid_argument("normalize_wt4: weight-3 part must vanish");
    int n = sig.n;
    Poly A4 = H3.weighted_component(4);

    std::vector<detail::JetUnknown> unknowns;
    for (int j = 0; j < n; ++j) detail::add_unknowns_of_weight(unknowns, j, 3, n);
    detail::add_unknowns_of_weight(unknowns, -1, 4, n);

    // constraints: every non-(2,2) part of B = A4 + effect vanishes, and the
    // (2,2) part is Delta_l-harmonic; encode as two stacked linear systems by
    // mapping each effect through  P(B) = (B - B_(2,2))  +  y * Delta_l(B_(2,2))
    // with an extra variable slot y realized by separate coordinates.
    auto project = [&](const Poly& B) {
        Poly b22 = B.bidegree_component(2, 2, 0);
        return std::pair{B - b22, laplacian_l(b22, sig)};
    };
    std::vector<Poly> cols1, cols2;
    for (const auto& uk : unknowns) {
        Poly eff = detail::first_order_effect(uk, sig, 4).weighted_component(4);
        auto [p1, p2] = project(eff);
        cols1.push_back(std::move(p1));
        cols2.push_back(std::move(p2));
    }
    auto [t1, t2] = project(A4);
    std::vector<Poly> all1 = cols1, all2 = cols2;
    all1.push_back(t1);
    all2.push_back(t2);
    auto reps1 = detail::real_reps(all1);
    auto reps2 = detail::real_reps(all2);
    std::size_t r1 = detail::real_coords(t1, reps1).size();
    std::size_t r2 = detail::real_coords(t2, reps2).size();
    CMatrix M(r1 + r2, unknowns.size());
    std::vector<CRational> rhs(r1 + r2);
    for (std::size_t c = 0; c < unknowns.size(); ++c) {
        auto v1 = detail::real_coords(cols1[c], reps1);
        auto v2 = detail::real_coords(cols2[c], reps2);
        for (std::size_t r = 0; r < r1; ++r) M(r, c) = CRational(v1[r]);
        for (std::size_t r = 0; r < r2; ++r) M(r1 + r, c) = CRational(v2[r]);
    }
    auto b1 = detail::real_coords(-t1, reps1);
    auto b2 = detail::real_coords(-t2, reps2);
    for (std::size_t r = 0; r < r1; ++r) rhs[r] = CRational(b1[r]);
    for (std::size_t r = 0; r < r2; ++r) rhs[r1 + r] = CRational(b2[r]);
    auto sol = M.solve(rhs);
    if (!sol) throw std::runtime_error("normalize_wt4: matching system is inconsistent");

    HoloJet jet = HoloJet::identity(sig);
    for (std::size_t k = 0; k < unknowns.size(); ++k) {
        const CRational& x = (*sol)[k];
        if (x.is_zero()) continue;
        CRational coef = unknowns[k].imag ? x * CRational::i() : x;
        if (unknowns[k].fcomp < 0)
            jet.g.add_term(unknowns[k].mono, coef);
        else
            jet.f[unknowns[k].fcomp].add_term(unknowns[k].mono, coef);
    }
    Poly out = compose_truncated(H3, jet, kMaxWeight, true);
    Poly s4 = out.weighted_component(4);
    if (!(s4 == s4.bidegree_component(2, 2, 0)))
        throw std::runtime_error("normalize_wt4: weight-4 part is not pure (2,2)");
    if (!laplacian_l(s4, sig).is_zero())
        throw std::runtime_error("normalize_wt4: weight-4 part is not harmonic");
    if (!out.weighted_component(3).is_zero())
        throw std::runtime_error("normalize_wt4: weight-3 part reappeared");
    return {std::move(jet), CRational(4) * s4, std::move(out)};
}

struct LowOrderCleanup {
    HoloJet jet;
    Poly surface;
};

namespace detail {

// terms of ordinary degree <= 4 but weighted degree >= 5 (u-heavy tail)
inline Poly bad_low_order(const Poly& H, int weight) {
    return H.weighted_component(weight).filter([](const Mono& m) {
        return m.degree() <= 4;
    });
}

} // namespace detail

/// Remove residual terms of ordinary degree <= 4 (which necessarily carry
/// u-powers and weighted degree >= 5) without touching the weight-4 normal
/// form part. One ascending pass over weights 5..8 suffices: each stage's
/// jet only affects its own weight and above.
inline LowOrderCleanup cleanup_low_order(const Poly& H4, const Signature& sig) {
    int n = sig.n;
    Poly cur = H4;
    HoloJet total = HoloJet::identity(sig);
    for (int d = 5; d <= kMaxWeight; ++d) {
        Poly target = detail::bad_low_order(cur, d);
        if (target.is_zero()) continue;
        std::vector<detail::JetUnknown> unknowns;
        for (int j = 0; j < n; ++j)
            detail::add_unknowns_of_weight(unknowns, j, d - 1, n, 3);
        detail::add_unknowns_of_weight(unknowns, -1, d, n, 4);

        // match only the low-order coordinates at weight d
        std::vector<Poly> cols;
        for (const auto& uk : unknowns)
            cols.push_back(detail::bad_low_order(
                detail::first_order_effect(uk, sig, d), d));
        std::vector<Poly> all = cols;
        all.push_back(target);
        auto reps = detail::real_reps(all);
        CMatrix M(detail::real_coords(target, reps).size(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            auto v = detail::real_coords(cols[c], reps);
            for (std::size_t r = 0; r < v.size(); ++r) M(r, c) = CRational(v[r]);
        }
        auto tv = detail::real_coords(-target, reps);
        std::vector<CRational> rhs(tv.size());
        for (std::size_t r = 0; r < tv.size(); ++r) rhs[r] = CRational(tv[r]);
        auto sol = M.solve(rhs);
        if (!sol) throw std::runtime_error("cleanup_low_order: inconsistent system");
        HoloJet jet = HoloJet::identity(sig);
        for (std::size_t k = 0; k < unknowns.size(); ++k) {
            const CRational& x = (*sol)[k];
            if (x.is_zero()) continue;
            CRational coef = unknowns[k].imag ? x * CRational::i() : x;
            if (unknowns[k].fcomp < 0)
                jet.g.add_term(unknowns[k].mono, coef);
            else
                jet.f[unknowns[k].fcomp].add_term(unknowns[k].mono, coef);
        }
        cur = compose_truncated(cur, jet, kMaxWeight, true);
        if (!detail::bad_low_order(cur, d).is_zero())
            throw std::runtime_error("cleanup_low_order: stage left residue");
        total = jet.after(total);
    }
    for (int d = 5; d <= kMaxWeight; ++d)
        if (!detail::bad_low_order(cur, d).is_zero())
            throw std::runtime_error("cleanup_low_order: residue survived");
    return {std::move(total), std::move(cur)};
}

struct NormalForm4 {
    Signature sig;
    Poly s;        // trace-free (2,2) quartic
    HoloJet jet;   // composite normalizing jet
    Poly residual; // graph tail minus s/4: o_wt(4) and degree > 4
};

/// Full order-4 normalization pipeline.
inline NormalForm4 normalize_to_order4(const Poly& H, const Signature& sig) {
    validate_prenormal(H, sig);
    Wt3Kill a = kill_wt3(H, sig);
    Wt4Normalization b = normalize_wt4(a.surface, sig);
    LowOrderCleanup c = cleanup_low_order(b.surface, sig);
    HoloJet jet = c.jet.after(b.jet.after(a.jet));
    Poly residual = c.surface - CRational(Rat(1, 4)) * b.s;
    for (int d = 0; d <= 4; ++d)
        if (!residual.weighted_component(d).is_zero())
            throw std::runtime_error("normalize_to_order4: residual not o_wt(4)");
    if (!jet.fixes_origin())
        throw std::runtime_error("normalize_to_order4: jet moved the base point");
    return {sig, std::move(b.s), std::move(jet), std::move(residual)};
}

} // namespace cmw
