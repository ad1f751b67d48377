#include <catch_amalgamated.hpp>

#include <cmath>

#include "plgds/rng.hpp"
#include "plgds/solvers.hpp"

using namespace plgds;

namespace {

MultiGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
    Rng rng(seed);
    MultiGraph g(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (uniform01(rng) < p) g.add_edge(u, v);
    return g;
}

std::size_t brute_force(const MultiGraph& g) {
    const std::size_t n = g.n();
    std::vector<std::uint32_t> closed(n);
    for (Vertex v = 0; v < n; ++v) {
        closed[v] = 1u << v;
        for (auto u : g.distinct_neighbors(v)) closed[v] |= 1u << u;
    }
    const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
    std::size_t best = n;
    for (std::uint32_t s = 0; s <= full; ++s) {
        auto k = static_cast<std::size_t>(std::popcount(s));
        if (k >= best) continue;
        std::uint32_t cov = 0;
        for (std::uint32_t t = s; t; t &= t - 1) cov |= closed[std::countr_zero(t)];
        if (cov == full) best = k;
    }
    return best;
}

MultiGraph star(std::size_t leaves) {
    MultiGraph g(leaves + 1);
    for (Vertex v = 1; v <= leaves; ++v) g.add_edge(0, v);
    return g;
}

MultiGraph clique(std::size_t n) {
    MultiGraph g(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

}  // namespace

TEST_CASE("exact: small fixed graphs") {
    MultiGraph p4(4);
    p4.add_edge(0, 1);
    p4.add_edge(1, 2);
    p4.add_edge(2, 3);
    CHECK(exact_size(p4) == 2);
    CHECK(brute_force(p4) == 2);
    CHECK(exact_min_ds(star(7)).solution == VertexSet{0});
    CHECK(exact_size(clique(9)) == 1);
    CHECK(exact_size(MultiGraph(5)) == 5);
    CHECK(exact_size(MultiGraph(0)) == 0);
    auto r = exact_min_ds(p4);
    CHECK(r.lb_kind == LowerBoundKind::ExactOpt);
    CHECK(r.ratio() == 1.0);
}

TEST_CASE("exact matches brute force on random graphs") {
    for (std::uint64_t s = 0; s < 300; ++s) {
        std::size_t n = 1 + s % 18;
        double p = 0.05 + 0.05 * static_cast<double>(s % 9);
        auto g = random_graph(n, p, s);
        auto r = exact_min_ds(g);
        INFO("seed " << s << " n " << n);
        CHECK(is_dominating(g, r.solution));
        CHECK(r.solution.size() == brute_force(g));
    }
}

TEST_CASE("exact: components beyond the cap") {
    MultiGraph g(200);
    for (Vertex i = 0; i + 1 < 200; ++i)
        if (i % 10 != 9) g.add_edge(i, i + 1);
    // 20 paths of 10 vertices: 4 each
    CHECK(exact_size(g) == 80);
    CHECK_THROWS_AS(exact_size(random_graph(80, 0.2, 3)), DomainError);
    auto big = random_graph(90, 0.08, 11);
    try {
        exact_min_ds(big, {64, 5});
        FAIL("budget should be exhausted");
    } catch (const BudgetExceeded& e) {
        CHECK(is_dominating(big, e.incumbent));
        CHECK(e.lower_bound <= e.incumbent.size());
        CHECK(e.lower_bound >= 1);
    }
}

TEST_CASE("greedy") {
    CHECK(greedy_min_ds(star(5)).solution == VertexSet{0});
    CHECK(greedy_min_ds(MultiGraph(4)).solution == (VertexSet{0, 1, 2, 3}));
    // tie on gain: lowest id wins
    MultiGraph two(4);
    two.add_edge(0, 1);
    two.add_edge(2, 3);
    CHECK(greedy_min_ds(two).solution == (VertexSet{0, 2}));
    for (std::uint64_t s = 0; s < 500; ++s) {
        std::size_t n = 2 + s % 29;
        auto g = random_graph(n, 0.03 + 0.02 * static_cast<double>(s % 12), 1000 + s);
        auto gr = greedy_min_ds(g);
        auto ex = exact_size(g);
        CHECK(is_dominating(g, gr.solution));
        CHECK(gr.solution.size() >= ex);
        CHECK(static_cast<double>(gr.solution.size()) <=
              (std::log(static_cast<double>(g.max_degree()) + 1) + 1) * static_cast<double>(ex));
        CHECK(gr.lower_bound <= ex);
    }
}

TEST_CASE("structured") {
    auto g = random_graph(12, 0.4, 5);
    auto d = structural_decomposition(g);
    if (d.V1.empty()) CHECK(structured_min_ds(g).solution == greedy_min_ds(g).solution);
    MultiGraph two(4);
    two.add_edge(0, 1);
    two.add_edge(2, 3);
    auto r = structured_min_ds(two);
    CHECK(r.solution == (VertexSet{0, 2}));
    CHECK(r.decomposition->M == 4);
    CHECK(r.decomposition->W == 0);
    for (std::uint64_t s = 0; s < 300; ++s) {
        auto h = random_graph(4 + s % 25, 0.08, 7000 + s);
        auto st = structured_min_ds(h);
        auto ex = exact_min_ds(h);
        CHECK(is_dominating(h, st.solution));
        CHECK(st.solution.size() >= ex.solution.size());
        auto dd = structural_decomposition(h);
        auto ind = induced_subgraph(h, dd.R);
        auto opt_r = exact_size(ind.graph);
        CHECK(static_cast<double>(st.solution.size()) <=
              structured_envelope(*st.decomposition, opt_r, h.max_degree()) + 1e-9);
    }
}

TEST_CASE("lemma2 on histograms") {
    // one hub of degree 10: vol([10,10]) = 10 is not below the 10 leaves
    auto r = lemma2_for_graph(star(10), Lemma2Variant::A);
    CHECK(!r.found);
    std::vector<std::uint64_t> counts{0, 100, 20, 5, 1};
    auto a = lemma2_from_counts(counts, Lemma2Variant::A, 100);
    // vol([2,4]) = 40+15+4 = 59 < 100, vol([1,4]) = 159
    CHECK(a.found);
    CHECK(a.t == 2);
    CHECK(a.bound == 26);
    auto b = lemma2_from_counts(counts, Lemma2Variant::B, 0);
    // vol([2,4]) = 59 < |[1,1]| = 100
    CHECK(b.found);
    CHECK(b.t == 2);
    CHECK(b.bound == 26);
    auto b2 = lemma2_from_counts({0, 30, 20, 5, 1}, Lemma2Variant::B, 0);
    // vol([3,4]) = 19 < |[1,2]| = 50 while vol([2,4]) = 59 >= 30
    CHECK(b2.t == 3);
    CHECK(b2.bound == 6);
}

TEST_CASE("lemma2 on model params") {
    auto p = PlgParams::from_scale(1e4, 3);
    auto a = lemma2_lower_bound(p, Lemma2Variant::A);
    CHECK(a.found);
    CHECK(a.bound >= 1);
    CHECK(a.x_star > 1.0 / static_cast<double>(p.delta()));
    auto s = build_sequence(p);
    auto h = lemma2_from_counts(s.counts, Lemma2Variant::A, static_cast<u128>(std::floor(p.scale)));
    CHECK(h.t == a.t);
    CHECK(h.bound == a.bound);
    auto pb = lemma2_lower_bound(p, Lemma2Variant::B);
    auto hb = lemma2_from_counts(s.counts, Lemma2Variant::B, 0);
    CHECK(pb.t == hb.t);
    CHECK(pb.bound == hb.bound);
    // minimality of t
    auto D = p.delta();
    auto e = interval_estimate(p, a.t - 1, D);
    CHECK(!(e.exact_volume < static_cast<u128>(10000)));
}

TEST_CASE("csv row") {
    MultiGraph p3(3);
    p3.add_edge(0, 1);
    p3.add_edge(1, 2);
    auto r = exact_min_ds(p3);
    CHECK(csv_row(r, p3, 3.0) == "exact,3,2,3,1,1,exact,1.000000");
    CHECK(csv_row(greedy_min_ds(p3), p3, std::nullopt).rfind("greedy,3,2,NA,1,", 0) == 0);
}

TEST_CASE("leaf kernel") {
    // caterpillar: spine of 150, two leaves per spine vertex
    MultiGraph cat(450);
    for (Vertex i = 0; i + 1 < 150; ++i) cat.add_edge(i, i + 1);
    for (Vertex i = 0; i < 150; ++i) {
        cat.add_edge(i, 150 + 2 * i);
        cat.add_edge(i, 151 + 2 * i);
    }
    auto k = leaf_kernel(cat);
    CHECK(k.forced.size() == 150);
    CHECK(k.parts.empty());
    auto r = exact_min_ds(cat);
    CHECK(r.solution.size() == 150);
    CHECK(r.lb_kind == LowerBoundKind::ExactOpt);
    // pendant edges on a random core leave small parts
    for (std::uint64_t s = 0; s < 40; ++s) {
        auto core = random_graph(14, 0.25, 500 + s);
        MultiGraph g(20);
        for (auto [u, v] : core.edges()) g.add_edge(u, v);
        for (Vertex v = 0; v < 6; ++v) g.add_edge(2 * v, 14 + v);
        auto ex = exact_min_ds(g);
        CHECK(is_dominating(g, ex.solution));
        CHECK(ex.solution.size() == brute_force(g));
    }
}
