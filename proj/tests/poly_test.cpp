#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cmw/hermitian.hpp"
#include "cmw/poly.hpp"

using namespace cmw;

namespace {

Mono mono(std::vector<int> a, std::vector<int> b, int k) {
    return Mono{std::move(a), std::move(b), k};
}

Poly random_poly(int n, int max_terms, std::mt19937_64& rng, bool real) {
    std::uniform_int_distribution<int> exp(0, 2), coef(-4, 4), uexp(0, 1);
    Poly p(n);
    for (int t = 0; t < max_terms; ++t) {
        Mono m;
        m.a.resize(n);
        m.b.resize(n);
        for (int j = 0; j < n; ++j) {
            m.a[j] = exp(rng);
            m.b[j] = exp(rng);
        }
        m.k = uexp(rng);
        CRational c(Rat(coef(rng)), Rat(coef(rng)));
        p.add_term(m, c);
        if (real) p.add_term(m.swapped(), c.conj());
    }
    return p;
}

} // namespace

TEST_CASE("complex rational field arithmetic") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(-9, 9);
    auto frac = [](int n, int den) {
        Rat r(n, den);
        r.canonicalize();
        return r;
    };
    for (int t = 0; t < 200; ++t) {
        CRational x(Rat(d(rng)), Rat(d(rng)));
        CRational y(frac(d(rng), 1 + std::abs(d(rng))), Rat(d(rng)));
        CRational z(Rat(d(rng)), frac(d(rng), 1 + std::abs(d(rng))));
        REQUIRE(x.conj().conj() == x);
        REQUIRE((x + y) * z == x * z + y * z);
        REQUIRE(x * (y * z) == (x * y) * z);
        if (!y.is_zero()) REQUIRE((x / y) * y == x);
    }
    REQUIRE(CRational::i() * CRational::i() == CRational(-1));
}

TEST_CASE("rational string round trip") {
    REQUIRE(rat_to_string(Rat(-3, 6)) == "-1/2");
    REQUIRE(rat_from_string("7/3") == Rat(7, 3));
    REQUIRE(rat_from_string("-5") == Rat(-5));
}

TEST_CASE("weighted component partitions a polynomial") {
    // |z1|^2 + u^2: weight 2 picks |z1|^2, u^2 has weight 4
    Poly p = Poly::var_z(2, 0) * Poly::var_zbar(2, 0) +
             Poly::var_u(2) * Poly::var_u(2);
    REQUIRE(p.weighted_component(2) ==
            Poly::var_z(2, 0) * Poly::var_zbar(2, 0));
    REQUIRE(p.weighted_component(4) == Poly::var_u(2) * Poly::var_u(2));
    REQUIRE(p.weighted_component(3).is_zero());

    Poly zero(2);
    REQUIRE(zero.weighted_component(4).is_zero());

    // sum over degrees reconstructs
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        Poly q = random_poly(2, 6, rng, false);
        Poly sum(2);
        for (int d = 0; d <= 16; ++d) sum += q.weighted_component(d);
        REQUIRE(sum == q);
    }
}

TEST_CASE("degree-8 norm combination is a single weighted component") {
    // |z|^8 + c Re(|z|^2 z^6) in one variable: all terms have |a|+|b| = 8
    int n = 1;
    Poly z = Poly::var_z(n, 0), zb = Poly::var_zbar(n, 0);
    Poly zn = z * zb;
    Poly z6 = z * z * z * z * z * z;
    CRational c(Rat(21, 10));
    Poly p = zn * zn * zn * zn + c * re_part(zn * z6);
    REQUIRE(p.weighted_component(8) == p);
}

TEST_CASE("bidegree component") {
    Poly p1 = Poly::var_z(2, 0) * Poly::var_z(2, 0) * Poly::var_zbar(2, 0) *
                  Poly::var_zbar(2, 0) -
              Poly::var_z(2, 1) * Poly::var_z(2, 1) * Poly::var_zbar(2, 1) *
                  Poly::var_zbar(2, 1);
    REQUIRE(p1.bidegree_component(2, 2, 0) == p1);

    // Im(z1^2 zbar2) u, component (2,1,1) = -(i/2) z1^2 zbar2 u
    Poly z1 = Poly::var_z(2, 0), zb2 = Poly::var_zbar(2, 1);
    Poly p2 = im_part(z1 * z1 * zb2) * Poly::var_u(2);
    Poly expect(2);
    expect.add_term(mono({2, 0}, {0, 1}, 1), CRational(Rat(0), Rat(-1, 2)));
    REQUIRE(p2.bidegree_component(2, 1, 1) == expect);
    REQUIRE(p2.bidegree_component(1, 2, 1) == expect.conj());

    Poly u2 = Poly::var_u(2) * Poly::var_u(2);
    REQUIRE(u2.bidegree_component(0, 0, 2) == u2);
}

TEST_CASE("model restriction of holomorphic polynomials") {
    Signature sig(2, 1);
    HoloPoly w = HoloPoly::var_w(2);
    Poly L = norm_sq_poly(sig);
    REQUIRE(im_part(model_restrict(w, sig)) == L);
    REQUIRE(re_part(model_restrict(w, sig)) == Poly::var_u(2));

    // Im(z1 w) = u Im z1 + Re z1 |z|^2_l
    HoloPoly z1w = HoloPoly::var_z(2, 0) * w;
    Poly z1 = Poly::var_z(2, 0);
    Poly expect = Poly::var_u(2) * im_part(z1) + re_part(z1) * L;
    REQUIRE(im_part(model_restrict(z1w, sig)) == expect);
}

TEST_CASE("reality is preserved by ring operations") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 25; ++t) {
        Poly p = random_poly(2, 5, rng, true);
        Poly q = random_poly(2, 5, rng, true);
        REQUIRE(p.is_real());
        REQUIRE((p + q).is_real());
        REQUIRE((p * q).is_real());
        REQUIRE(p.weighted_component(4).is_real());
        // bidegree pieces pair up under conjugation
        REQUIRE(p.bidegree_component(2, 1, 0).conj() ==
                p.bidegree_component(1, 2, 0));
    }
}

TEST_CASE("grading is multiplicative") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 15; ++t) {
        Poly p = random_poly(2, 4, rng, false);
        Poly q = random_poly(2, 4, rng, false);
        Poly pq = p * q;
        for (int d = 0; d <= 10; ++d) {
            Poly conv(2);
            for (int a = 0; a <= d; ++a)
                conv += p.weighted_component(a) * q.weighted_component(d - a);
            REQUIRE(pq.weighted_component(d) == conv);
        }
    }
}

TEST_CASE("truncated substitution agrees with exact products") {
    std::mt19937_64 rng(41);
    int n = 2;
    std::vector<Poly> zs{Poly::var_z(n, 0), Poly::var_z(n, 1)};
    std::vector<Poly> zbs{Poly::var_zbar(n, 0), Poly::var_zbar(n, 1)};
    Poly us = Poly::var_u(n);
    for (int t = 0; t < 10; ++t) {
        Poly p = random_poly(n, 5, rng, false);
        // identity substitution, generous cutoff
        REQUIRE(p.substitute(zs, zbs, us, 40) == p);
        // truncation really cuts
        Poly cut = p.substitute(zs, zbs, us, 4);
        REQUIRE(cut == p.truncate_weight(4));
    }
}

TEST_CASE("holomorphic jet composition basics") {
    int n = 2;
    HoloPoly z1 = HoloPoly::var_z(n, 0), z2 = HoloPoly::var_z(n, 1);
    HoloPoly w = HoloPoly::var_w(n);
    // g(z, w) = w + z1^2: compose with scaling z -> 2z, w -> 4w
    HoloPoly g = w + z1 * z1;
    CRational two(2), four(4);
    std::vector<HoloPoly> zs{two * z1, two * z2};
    HoloPoly comp = g.compose(zs, four * w, 8);
    REQUIRE(comp == four * w + four * (z1 * z1));
    (void)z2;
}

TEST_CASE("evaluation matches substitution of constants") {
    std::mt19937_64 rng(59);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int t = 0; t < 20; ++t) {
        Poly p = random_poly(2, 5, rng, false);
        std::vector<CRational> z{CRational(Rat(d(rng)), Rat(d(rng))),
                                 CRational(Rat(d(rng)), Rat(d(rng)))};
        CRational u(Rat(d(rng)));
        CRational direct = p.eval(z, u);
        // conj(P) evaluated at z equals the conjugate of P(z) for real u
        REQUIRE(p.conj().eval(z, u) == direct.conj());
    }
}
