#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qk/quiver.hpp"

using namespace qk;

namespace {

Quiver a3() {
    Quiver q;
    q.add_vertex("x");
    q.add_vertex("y");
    q.add_vertex("z");
    q.add_arrow("a", "x", "y");
    q.add_arrow("b", "y", "z");
    return q;
}

Quiver two_loop() {
    Quiver q;
    q.add_vertex("v");
    q.add_arrow("u", "v", "v");
    q.add_arrow("v", "v", "v"); // arrow names live in their own namespace
    return q;
}

Quiver kronecker() {
    Quiver q;
    q.add_vertex("x");
    q.add_vertex("y");
    q.add_arrow("a", "x", "y");
    q.add_arrow("b", "x", "y");
    return q;
}

/* independent oracle: entry (x,y) of the n-th power of the arrow-count
 * adjacency matrix counts length-n paths x -> y */
std::vector<std::vector<long long>> adjacency_power(const Quiver& q, int n) {
    int nv = q.num_vertices();
    std::vector<std::vector<long long>> a(nv, std::vector<long long>(nv, 0)),
        p(nv, std::vector<long long>(nv, 0));
    for (int i = 0; i < q.num_arrows(); ++i) a[q.arrow(i).src][q.arrow(i).tgt]++;
    for (int i = 0; i < nv; ++i) p[i][i] = 1;
    for (int s = 0; s < n; ++s) {
        std::vector<std::vector<long long>> r(nv, std::vector<long long>(nv, 0));
        for (int i = 0; i < nv; ++i)
            for (int k = 0; k < nv; ++k)
                for (int j = 0; j < nv; ++j) r[i][j] += p[i][k] * a[k][j];
        p = r;
    }
    return p;
}

} // namespace

TEST_CASE("path enumeration frozen examples") {
    auto q = a3();
    auto ps = paths(q, q.vertex("x"), q.vertex("z"), 2);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].arrows == std::vector<int>{0, 1});
    CHECK(path_str(q, ps[0]) == "b*a");

    auto triv = paths(q, q.vertex("x"), q.vertex("x"), 0);
    REQUIRE(triv.size() == 1);
    CHECK(triv[0].length() == 0);
    CHECK(path_str(q, triv[0]) == "e_x");
    CHECK(paths(q, q.vertex("x"), q.vertex("z"), 1).empty());

    auto l = two_loop();
    auto words = paths(l, 0, 0, 2);
    REQUIRE(words.size() == 4);
    // lex order on arrow-index sequences (u=0, v=1)
    CHECK(words[0].arrows == std::vector<int>{0, 0});
    CHECK(words[1].arrows == std::vector<int>{0, 1});
    CHECK(words[2].arrows == std::vector<int>{1, 0});
    CHECK(words[3].arrows == std::vector<int>{1, 1});
    CHECK(std::is_sorted(words.begin(), words.end()));
}

TEST_CASE("path counts match the adjacency-matrix oracle") {
    for (const Quiver& q : {a3(), two_loop(), kronecker()}) {
        for (int n = 0; n <= 5; ++n) {
            auto an = adjacency_power(q, n);
            for (int x = 0; x < q.num_vertices(); ++x)
                for (int y = 0; y < q.num_vertices(); ++y)
                    CHECK(static_cast<long long>(paths(q, x, y, n).size()) == an[x][y]);
        }
    }
}

TEST_CASE("path cap guards cyclic quivers") {
    auto l = two_loop();
    CHECK_THROWS_AS(paths(l, 0, 0, 10, 100), PathExplosion);
    CHECK(paths(l, 0, 0, 10, 1024).size() == 1024);
}

TEST_CASE("opposite quiver") {
    auto q = a3();
    auto o = q.opposite();
    CHECK(o.num_arrows() == 2);
    CHECK(o.arrow(0).name == "a");
    CHECK(o.arrow(0).src == q.vertex("y"));
    CHECK(o.arrow(0).tgt == q.vertex("x"));
    CHECK(o.opposite() == q);

    auto l = two_loop();
    CHECK(l.opposite() == l);
}

TEST_CASE("grading inference") {
    auto q = a3();
    auto g = infer_grading(q);
    CHECK(g.level == std::vector<long long>{0, 1, 2});

    auto k = kronecker();
    CHECK(infer_grading(k).level == std::vector<long long>{0, 1});

    auto l = two_loop();
    CHECK_THROWS_AS(infer_grading(l), NotGradable);
    CHECK(!is_gradable(l));

    // commutative square: one component, x at level 0
    Quiver sq;
    sq.add_vertex("x");
    sq.add_vertex("y");
    sq.add_vertex("w");
    sq.add_vertex("z");
    sq.add_arrow("a", "x", "y");
    sq.add_arrow("b", "x", "w");
    sq.add_arrow("c", "y", "z");
    sq.add_arrow("d", "w", "z");
    CHECK(infer_grading(sq).level == std::vector<long long>{0, 1, 1, 2});

    // two components: each based at level 0
    Quiver dis;
    dis.add_vertex("x");
    dis.add_vertex("y");
    dis.add_vertex("s");
    dis.add_vertex("t");
    dis.add_arrow("a", "x", "y");
    dis.add_arrow("b", "t", "s"); // note reversed declaration: t -> s
    // s has the lower index, so the second component is based at s = 0
    CHECK(infer_grading(dis).level == std::vector<long long>{0, 1, 0, -1});

    // A_3 with both arrows into the middle is still gradable
    Quiver vee;
    vee.add_vertex("x");
    vee.add_vertex("y");
    vee.add_vertex("z");
    vee.add_arrow("a", "x", "y");
    vee.add_arrow("b", "z", "y");
    CHECK(infer_grading(vee).level == std::vector<long long>{0, 1, 0});

    // undirected cycle with net level 2 is not gradable
    Quiver bad;
    bad.add_vertex("x");
    bad.add_vertex("y");
    bad.add_vertex("z");
    bad.add_arrow("a", "x", "y");
    bad.add_arrow("b", "y", "z");
    bad.add_arrow("c", "z", "x");
    CHECK_THROWS_AS(infer_grading(bad), NotGradable);
}

TEST_CASE("gradable quivers concentrate path lengths") {
    Quiver sq;
    sq.add_vertex("x");
    sq.add_vertex("y");
    sq.add_vertex("w");
    sq.add_vertex("z");
    sq.add_arrow("a", "x", "y");
    sq.add_arrow("b", "x", "w");
    sq.add_arrow("c", "y", "z");
    sq.add_arrow("d", "w", "z");
    auto g = infer_grading(sq);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            for (int n = 0; n <= 4; ++n) {
                if (n != g.level[y] - g.level[x]) CHECK(paths(sq, x, y, n).empty());
            }
    CHECK(paths(sq, sq.vertex("x"), sq.vertex("z"), 2).size() == 2);
}

TEST_CASE("concat validates endpoints") {
    auto q = a3();
    auto a = paths(q, 0, 1, 1)[0];
    auto b = paths(q, 1, 2, 1)[0];
    auto ab = concat(a, b);
    CHECK(ab.arrows == std::vector<int>{0, 1});
    CHECK_THROWS_AS(concat(b, a), ComposeMismatch);
}

TEST_CASE("duplicate names are rejected") {
    Quiver q;
    q.add_vertex("x");
    CHECK_THROWS_AS(q.add_vertex("x"), ParseError);
    q.add_vertex("y");
    q.add_arrow("a", "x", "y");
    CHECK_THROWS_AS(q.add_arrow("a", "y", "x"), ParseError);
    CHECK_THROWS_AS(q.add_arrow("b", "x", "nope"), ParseError);
}
