#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cmw/normalform.hpp"

using namespace cmw;

namespace {

Mono mono(std::vector<int> a, std::vector<int> b, int k = 0) {
    return Mono{std::move(a), std::move(b), k};
}

// random real graph tail with terms of weighted degree 3..maxw and ordinary
// degree bounded so the truncation cap is respected
Poly random_tail(const Signature& sig, std::mt19937_64& rng, int maxw = 4) {
    int n = sig.n;
    std::uniform_int_distribution<int> coef(-3, 3), pick(0, n - 1), kd(0, 1);
    Poly H(n);
    std::uniform_int_distribution<int> wd(3, maxw);
    for (int t = 0; t < 10; ++t) {
        int w = wd(rng);
        int k = kd(rng);
        if (2 * k >= w) k = 0;
        int deg = w - 2 * k;
        Mono m;
        m.a.assign(n, 0);
        m.b.assign(n, 0);
        m.k = k;
        std::uniform_int_distribution<int> split(0, deg);
        int za = split(rng);
        for (int e = 0; e < za; ++e) m.a[pick(rng)] += 1;
        for (int e = 0; e < deg - za; ++e) m.b[pick(rng)] += 1;
        CRational c(Rat(coef(rng)), Rat(coef(rng)));
        H.add_term(m, c);
        H.add_term(m.swapped(), c.conj());
    }
    return H;
}

} // namespace

TEST_CASE("identity jet leaves the graph tail unchanged") {
    Signature sig(2, 1);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 5; ++t) {
        Poly H = random_tail(sig, rng);
        REQUIRE(compose_truncated(H, HoloJet::identity(sig), 8) ==
                H.truncate_weight(8));
    }
}

TEST_CASE("non-identity linear part is rejected") {
    Signature sig(2, 1);
    HoloJet jet = HoloJet::identity(sig);
    jet.f[0] = CRational(2) * jet.f[0];
    REQUIRE_THROWS_AS(compose_truncated(Poly(2), jet, 8), std::invalid_argument);
}

TEST_CASE("scaling frame acts with homogeneity degree 2 on (2,2) forms") {
    Signature sig(2, 1);
    Poly s(2);
    s.add_term(mono({2, 0}, {0, 2}), CRational(1));
    s.add_term(mono({0, 2}, {2, 0}), CRational(1));
    CMatrix U = CMatrix::identity(2);
    Poly scaled = precompose_frame(s, Rat(3), U, sig);
    REQUIRE(scaled == CRational(9) * s);
}

TEST_CASE("prenormal validation") {
    Signature sig(2, 1);
    Poly ok(2);
    ok.add_term(mono({2, 0}, {1, 0}), CRational(1));
    ok.add_term(mono({1, 0}, {2, 0}), CRational(1));
    REQUIRE_NOTHROW(validate_prenormal(ok, sig));

    Poly bad(2);
    bad.add_term(mono({1, 0}, {1, 0}), CRational(1)); // quadratic junk
    REQUIRE_THROWS_AS(validate_prenormal(bad, sig), std::invalid_argument);

    Poly unreal(2);
    unreal.add_term(mono({2, 0}, {1, 0}), CRational(1));
    REQUIRE_THROWS_AS(validate_prenormal(unreal, sig), std::invalid_argument);
}

TEST_CASE("weight-3 kill removes the weight-3 part") {
    // zero weight-3 part gives the identity jet
    Signature s20(2, 0);
    Poly H0(2);
    H0.add_term(mono({2, 0}, {2, 0}), CRational(1));
    auto k0 = kill_wt3(H0, s20);
    REQUIRE(k0.surface == H0);
    REQUIRE(k0.jet.f[0] == HoloPoly::var_z(2, 0));

    // 2 Re(z1^2 zbar2), n=2, l=0
    Poly H(2);
    H.add_term(mono({2, 0}, {0, 1}), CRational(1));
    H.add_term(mono({0, 1}, {2, 0}), CRational(1));
    auto k = kill_wt3(H, s20);
    REQUIRE(k.surface.weighted_component(3).is_zero());

    // u Im z1
    Poly Hu(2);
    Hu.add_term(mono({1, 0}, {0, 0}, 1), CRational(Rat(0), Rat(-1, 2)));
    Hu.add_term(mono({0, 0}, {1, 0}, 1), CRational(Rat(0), Rat(1, 2)));
    auto ku = kill_wt3(Hu, s20);
    REQUIRE(ku.surface.weighted_component(3).is_zero());

    // random weight-3 inputs across signatures
    for (auto [n, l] : {std::pair{2, 0}, {2, 1}, {3, 1}, {4, 2}}) {
        Signature sig(n, l);
        std::mt19937_64 rng(500 + 10 * n + l);
        for (int t = 0; t < 3; ++t) {
            Poly Hr = random_tail(sig, rng);
            auto kr = kill_wt3(Hr, sig);
            REQUIRE(kr.surface.weighted_component(3).is_zero());
            REQUIRE(kr.jet.linear_part_is_identity());
            REQUIRE(kr.jet.fixes_origin());
            REQUIRE(kr.surface.is_real());
        }
    }
}

TEST_CASE("weight-4 normalization on already-normal input") {
    Signature sig(2, 1);
    // harmonic (2,2): z1^2 zbar2^2 + conj
    Poly N(2);
    N.add_term(mono({2, 0}, {0, 2}), CRational(1));
    N.add_term(mono({0, 2}, {2, 0}), CRational(1));
    auto r = normalize_wt4(N, sig);
    REQUIRE(r.s == CRational(4) * N);

    Poly zero(2);
    auto rz = normalize_wt4(zero, sig);
    REQUIRE(rz.s.is_zero());
}

TEST_CASE("weight-4 normalization of |z1|^4 on the sphere signature") {
    Signature sig(2, 0);
    Poly H(2);
    H.add_term(mono({2, 0}, {2, 0}), CRational(1));
    auto r = normalize_wt4(H, sig);
    // harmonic part of |z1|^4 is the frozen hand value
    Poly expect(2);
    expect.add_term(mono({2, 0}, {2, 0}), CRational(Rat(1, 6)));
    expect.add_term(mono({1, 1}, {1, 1}), CRational(Rat(-2, 3)));
    expect.add_term(mono({0, 2}, {0, 2}), CRational(Rat(1, 6)));
    REQUIRE(r.s == CRational(4) * expect);
}

TEST_CASE("weight-4 normalization matches the dense matching oracle") {
    // oracle: the (2,2) part of the normalized weight-4 term must equal the
    // harmonic part of the input's (2,2) component, because every admissible
    // jet changes the (2,2) component only by pure-trace terms
    for (auto [n, l] : {std::pair{2, 0}, {2, 1}, {3, 1}}) {
        Signature sig(n, l);
        std::mt19937_64 rng(900 + 10 * n + l);
        for (int t = 0; t < 6; ++t) {
            Poly H = random_tail(sig, rng).weighted_component(4);
            auto r = normalize_wt4(H, sig);
            auto split = fischer_split_22(H.bidegree_component(2, 2, 0), sig);
            REQUIRE(r.s == CRational(4) * split.harmonic);
            REQUIRE(laplacian_l(r.s, sig).is_zero());
        }
    }
}

TEST_CASE("low-order cleanup removes u-heavy residue") {
    Signature sig(2, 1);
    // u^3 residue
    Poly H(2);
    H.add_term(mono({0, 0}, {0, 0}, 3), CRational(1));
    auto c = cleanup_low_order(H, sig);
    for (int d = 5; d <= 8; ++d) {
        Poly bad = c.surface.weighted_component(d).filter(
            [](const Mono& m) { return m.degree() <= 4; });
        REQUIRE(bad.is_zero());
    }

    // u * Im(z1^2 zbar2) style mixed residue plus u^4
    Poly H2(2);
    H2.add_term(mono({2, 0}, {0, 1}, 1), CRational(Rat(0), Rat(-1, 2)));
    H2.add_term(mono({0, 1}, {2, 0}, 1), CRational(Rat(0), Rat(1, 2)));
    H2.add_term(mono({0, 0}, {0, 0}, 4), CRational(Rat(2, 3)));
    auto c2 = cleanup_low_order(H2, sig);
    for (int d = 5; d <= 8; ++d) {
        Poly bad = c2.surface.weighted_component(d).filter(
            [](const Mono& m) { return m.degree() <= 4; });
        REQUIRE(bad.is_zero());
    }

    // clean input: identity
    Poly clean(2);
    clean.add_term(mono({2, 1}, {1, 1}, 1), CRational(1));
    clean.add_term(mono({1, 1}, {2, 1}, 1), CRational(1));
    auto c3 = cleanup_low_order(clean, sig);
    REQUIRE(c3.surface == clean.truncate_weight(8));
}

TEST_CASE("cleanup preserves the weight-4 part") {
    Signature sig(2, 1);
    std::mt19937_64 rng(77);
    for (int t = 0; t < 4; ++t) {
        Poly H = random_tail(sig, rng, 6);
        // strip weight-3 so the input is mid-pipeline-shaped
        H = H - H.weighted_component(3);
        auto c = cleanup_low_order(H, sig);
        REQUIRE(c.surface.weighted_component(4) == H.weighted_component(4));
    }
}

TEST_CASE("full pipeline on the hyperquadric") {
    for (auto [n, l] : {std::pair{2, 0}, {2, 1}, {3, 0}, {3, 1}, {4, 2}}) {
        Signature sig(n, l);
        auto nf = normalize_to_order4(Poly(n), sig);
        REQUIRE(nf.s.is_zero());
        REQUIRE(nf.residual.is_zero());
    }
}

TEST_CASE("full pipeline invariants on random inputs") {
    for (auto [n, l] : {std::pair{2, 0}, {2, 1}, {3, 1}}) {
        Signature sig(n, l);
        std::mt19937_64 rng(1300 + 10 * n + l);
        for (int t = 0; t < 3; ++t) {
            Poly H = random_tail(sig, rng, 5);
            auto nf = normalize_to_order4(H, sig);
            REQUIRE(laplacian_l(nf.s, sig).is_zero());
            REQUIRE(nf.s == nf.s.bidegree_component(2, 2, 0));
            for (int d = 0; d <= 4; ++d)
                REQUIRE(nf.residual.weighted_component(d).is_zero());
            Poly lowdeg = nf.residual.filter(
                [](const Mono& m) { return m.degree() <= 4; });
            REQUIRE(lowdeg.is_zero());
            REQUIRE(nf.jet.fixes_origin());
            REQUIRE(nf.jet.linear_part_is_identity());
            // determinism
            auto nf2 = normalize_to_order4(H, sig);
            REQUIRE(nf2.s == nf.s);
            // composite jet reproduces the final surface in one step
            Poly direct = compose_truncated(H, nf.jet, 8, true);
            REQUIRE(direct == nf.residual + CRational(Rat(1, 4)) * nf.s);
        }
    }
}
