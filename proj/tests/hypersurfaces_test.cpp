#include <catch2/catch_amalgamated.hpp>

#include "cmw/hypersurfaces.hpp"
#include "cmw/tensor.hpp"

using namespace cmw;

namespace {

Mono mono(std::vector<int> a, std::vector<int> b, int k = 0) {
    return Mono{std::move(a), std::move(b), k};
}

std::vector<CRational> basis_pair(int n, int i, int j) {
    std::vector<CRational> v(n);
    v[i] = CRational(1);
    v[j] = CRational(1);
    return v;
}

} // namespace

TEST_CASE("hyperquadric model") {
    for (auto [n, l] : {std::pair{1, 0}, {2, 1}, {3, 1}, {4, 2}}) {
        Signature sig{n, l};
        AlgebraicHypersurface M = hyperquadric(sig);
        REQUIRE(M.N == n + 1);
        REQUIRE(M.rho.is_real());
        // graph form with zero tail
        Poly H = graph_tail(M, sig);
        REQUIRE(H.is_zero());
        // the pipeline accepts it and produces a vanishing tensor
        NormalForm4 nf = normalize_to_order4(H, sig);
        REQUIRE(nf.s.is_zero());
        REQUIRE(extract_cmw(nf).is_zero());
    }
}

TEST_CASE("graph form round-trip and validation") {
    Signature sig{2, 1};
    Poly H(2);
    H.add_term(mono({2, 0}, {0, 1}), CRational(Rat(1), Rat(2)));
    H.add_term(mono({0, 1}, {2, 0}), CRational(Rat(1), Rat(-2)));
    H.add_term(mono({1, 0}, {1, 0}, 1), CRational(3));
    AlgebraicHypersurface M = ambient_from_tail(H, sig);
    REQUIRE(M.rho.is_real());
    REQUIRE(graph_tail(M, sig) == H);
    // a non-graph polynomial is rejected
    Poly bad = M.rho;
    std::vector<int> aw(3, 0);
    aw[2] = 2;
    bad.add_term(mono(aw, aw), CRational(1)); // |w|^4 term: v enters nonlinearly
    REQUIRE_THROWS_AS(graph_tail({3, bad}, sig), std::invalid_argument);
}

TEST_CASE("sphere perturbation chart") {
    SECTION("eps = 0 gives the hyperquadric chart") {
        SpherePerturbation sp = sphere_perturbation_local(4, 2, Rat(0));
        REQUIRE(sp.tail.is_zero());
        REQUIRE(sp.a == 0);
        REQUIRE(sp.surface.rho == hyperquadric(sp.sig).rho);
        REQUIRE(normalize_to_order4(sp.tail, sp.sig).s.is_zero());
    }
    SECTION("eps = 1/100 quartic tail and coefficient") {
        Rat eps(1, 100);
        SpherePerturbation sp = sphere_perturbation_local(4, 2, eps);
        // golden value from the independent symbolic-substitution oracle
        REQUIRE(sp.a == Rat(1, 50));
        // tail is exactly -(eps/2)(|z_0|^4 - |z_3|^4)
        Poly expect(4);
        expect.add_term(mono({2, 0, 0, 0}, {2, 0, 0, 0}), CRational(-eps / 2));
        expect.add_term(mono({0, 0, 0, 2}, {0, 0, 0, 2}), CRational(eps / 2));
        REQUIRE(sp.tail == expect);
        REQUIRE(sp.tail.weighted_component(3).is_zero());
    }
    SECTION("tensor signs at the two null directions") {
        SpherePerturbation sp = sphere_perturbation_local(4, 2, Rat(1, 100));
        CMWTensor T = extract_cmw(normalize_to_order4(sp.tail, sp.sig));
        auto X1 = basis_pair(4, 0, 2); // e_1 + e_3 (1-based)
        auto X2 = basis_pair(4, 1, 3); // e_2 + e_4
        REQUIRE(inner_l(X1, X1, sp.sig).is_zero());
        REQUIRE(inner_l(X2, X2, sp.sig).is_zero());
        REQUIRE(evaluate(T, X1, X1, X1, X1) == CRational(-sp.a));
        REQUIRE(evaluate(T, X2, X2, X2, X2) == CRational(sp.a));
        // and the sign test reports the obstruction
        REQUIRE(null_cone_definiteness(T, 60, 7).verdict == "obstructed");
        REQUIRE_FALSE(null_cone_zero_test(T));
    }
    SECTION("parameter validation") {
        REQUIRE_THROWS_AS(sphere_perturbation_local(2, 1, Rat(1, 100)),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(sphere_perturbation_local(4, 3, Rat(1, 100)),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(sphere_perturbation_local(4, 2, Rat(-1, 100)),
                          std::invalid_argument);
    }
}

TEST_CASE("Kohn-Nirenberg-type polynomial") {
    KNParams p; // defaults eps0 = 1/1000, c = 21/10, eps = 1/10000
    AlgebraicHypersurface M = kohn_nirenberg_rho(p);
    REQUIRE(M.N == 2);
    REQUIRE(M.rho.is_real());

    SECTION("term-by-term coefficient audit") {
        auto zm = [](int az, int bz) { return mono({az, 0}, {bz, 0}); };
        REQUIRE(M.rho.coeff(zm(4, 4)) == CRational(Rat(1, 1000)));
        REQUIRE(M.rho.coeff(zm(7, 1)) == CRational(Rat(21, 20000)));
        REQUIRE(M.rho.coeff(zm(1, 7)) == CRational(Rat(21, 20000)));
        REQUIRE(M.rho.coeff(mono({0, 1}, {0, 1})) == CRational(1));
        REQUIRE(M.rho.coeff(zm(5, 5)) == CRational(1));
        REQUIRE(M.rho.coeff(zm(1, 1)) == CRational(Rat(1, 10000)));
        REQUIRE(M.rho.coeff(zm(0, 0)) == CRational(-1));
        REQUIRE(M.rho.terms().size() == 7);
    }
    SECTION("base point lies on the surface") {
        std::vector<CRational> p0{CRational(0), CRational(1)};
        REQUIRE(M.rho.eval(p0, CRational(0)).is_zero());
    }
    SECTION("parameter ranges enforced") {
        KNParams bad = p;
        bad.c = Rat(16, 7);
        REQUIRE_THROWS_AS(kohn_nirenberg_rho(bad), std::invalid_argument);
        bad.c = Rat(2);
        REQUIRE_THROWS_AS(kohn_nirenberg_rho(bad), std::invalid_argument);
        bad = p;
        bad.eps0 = Rat(0);
        REQUIRE_THROWS_AS(kohn_nirenberg_rho(bad), std::invalid_argument);
        bad = p;
        bad.eps = Rat(1);
        REQUIRE_THROWS_AS(kohn_nirenberg_rho(bad), std::invalid_argument);
    }
}

TEST_CASE("Segre varieties") {
    SECTION("deformed surface at (0, 1) gives the plane w = 1") {
        SegreVariety Q = segre_variety(kohn_nirenberg_rho(KNParams{}),
                                       {CRational(0), CRational(1)});
        Poly expect(2);
        expect.add_term(mono({0, 1}, {0, 0}), CRational(1));
        expect.add_term(mono({0, 0}, {0, 0}), CRational(-1));
        REQUIRE(Q.Q == expect);
        REQUIRE_FALSE(Q.degenerate);
    }
    SECTION("hyperquadric model at the origin gives a w-plane") {
        Signature sig{2, 1};
        SegreVariety Q = segre_variety(hyperquadric(sig), std::vector<CRational>(3));
        Poly expect(3);
        std::vector<int> aw(3, 0), zero(3, 0);
        aw[2] = 1;
        expect.add_term(mono(aw, zero), CRational(Rat(0), Rat(-1, 2)));
        REQUIRE(Q.Q == expect);
    }
    SECTION("sphere at (0, 1) gives w = 1") {
        Poly rho(2);
        rho.add_term(mono({1, 0}, {1, 0}), CRational(1));
        rho.add_term(mono({0, 1}, {0, 1}), CRational(1));
        rho.add_term(mono({0, 0}, {0, 0}), CRational(-1));
        SegreVariety Q = segre_variety({2, rho}, {CRational(0), CRational(1)});
        Poly expect(2);
        expect.add_term(mono({0, 1}, {0, 0}), CRational(1));
        expect.add_term(mono({0, 0}, {0, 0}), CRational(-1));
        REQUIRE(Q.Q == expect);
    }
    SECTION("reflexivity: on-surface points lie on their Segre variety") {
        Poly rho(2);
        rho.add_term(mono({1, 0}, {1, 0}), CRational(1));
        rho.add_term(mono({0, 1}, {0, 1}), CRational(1));
        rho.add_term(mono({0, 0}, {0, 0}), CRational(-1));
        std::vector<CRational> p{CRational(Rat(3, 5), Rat(0)), CRational(Rat(0), Rat(4, 5))};
        REQUIRE(rho.eval(p, CRational(0)).is_zero());
        SegreVariety Q = segre_variety({2, rho}, p);
        REQUIRE(Q.Q.eval(p, CRational(0)).is_zero());
    }
    SECTION("degenerate result is flagged") {
        Poly rho(1);
        rho.add_term(mono({1}, {1}), CRational(1)); // |z|^2
        SegreVariety Q = segre_variety({1, rho}, {CRational(0)});
        REQUIRE(Q.degenerate);
    }
}

TEST_CASE("interior witness on the Segre variety") {
    SECTION("all tested eps at or below the threshold give exact witnesses") {
        KNParams p; // eps overwritten below
        p.eps = Rat(1, mpz_class(1) << 60);
        SegreWitness probe = segre_interior_witness(p);
        REQUIRE(probe.found);
        // t = eps0 (c - 1) / 2 = (1/1000)(11/10)/2
        REQUIRE(probe.lambda_prime_sq == Rat(11, 20000));
        REQUIRE(probe.eps_tilde > 0);
        std::vector<Rat> tested{probe.eps_tilde, Rat(probe.eps_tilde / 2),
                                Rat(probe.eps_tilde / 4)};
        for (const Rat& eps : tested) {
            p.eps = eps;
            SegreWitness w = segre_interior_witness(p);
            REQUIRE(w.found);
            REQUIRE(w.phi_value < 0);
            REQUIRE(w.rho_at_witness == w.phi_value);
            REQUIRE(w.segre_membership == 0);
        }
        // eps-tilde is maximal among powers of two: doubling it breaks phi < 0
        Rat t = probe.lambda_prime_sq, t4 = t * t * t * t;
        Rat phi_doubled = KNParams{}.eps0 * t4 * (1 - KNParams{}.c) + t4 * t +
                          (probe.eps_tilde * 2) * t;
        REQUIRE(phi_doubled >= 0);
    }
    SECTION("eps beyond the threshold yields no witness") {
        // the family default eps = 1/10000 lies far above eps-tilde here
        SegreWitness w = segre_interior_witness(KNParams{});
        REQUIRE_FALSE(w.found);
        REQUIRE(w.message == "no witness at this eps by this construction");
        REQUIRE(w.eps_tilde < Rat(1, 10000));
    }
}

TEST_CASE("pseudoconvexity scan") {
    SECTION("sphere is strongly pseudoconvex") {
        Poly rho(2);
        rho.add_term(mono({1, 0}, {1, 0}), CRational(1));
        rho.add_term(mono({0, 1}, {0, 1}), CRational(1));
        rho.add_term(mono({0, 0}, {0, 0}), CRational(-1));
        PseudoconvexityReport rep = pseudoconvexity_scan({2, rho}, 20);
        REQUIRE(rep.samples == 20);
        REQUIRE(rep.all_positive);
        REQUIRE(rep.min_eigenvalue > 0.9);
    }
    SECTION("deformed surface stays pseudoconvex at the default parameters") {
        PseudoconvexityReport rep =
            pseudoconvexity_scan(kohn_nirenberg_rho(KNParams{}), 25);
        REQUIRE(rep.samples == 25);
        REQUIRE(rep.all_positive);
        REQUIRE(rep.min_eigenvalue > 0);
    }
    SECTION("a sign-flipped control surface is detected") {
        // |w|^2 - |z|^2 - ... shifted so the origin stays interior:
        // rho = |w|^2 - |z|^2 + |z|^4 - 1 has pseudoconcave directions
        Poly rho(2);
        rho.add_term(mono({0, 1}, {0, 1}), CRational(1));
        rho.add_term(mono({1, 0}, {1, 0}), CRational(-1));
        rho.add_term(mono({2, 0}, {2, 0}), CRational(1));
        rho.add_term(mono({0, 0}, {0, 0}), CRational(-1));
        PseudoconvexityReport rep = pseudoconvexity_scan({2, rho}, 20);
        REQUIRE_FALSE(rep.all_positive);
        REQUIRE(rep.min_eigenvalue < 0);
    }
}
