#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "qk/presentation.hpp"

/*
 * Randomized gradable quadratic presentations for stress tests and the
 * `qk-gen` tool.  Vertices get levels first and arrows only connect
 * consecutive levels, so every generated quiver is gradable by
 * construction; the relation space of each vertex pair is the row span of
 * a uniformly random matrix of random height.
 */
namespace qk::gen {

struct RandomPresentationParams {
    int min_vertices = 2;
    int max_vertices = 6;
    int max_arrows = 10;
};

inline Presentation<GF>::Ptr random_gradable_presentation(
    std::mt19937_64& rng, GF f = GF{32003}, const RandomPresentationParams& par = {}) {
    std::uniform_int_distribution<int> nv_dist(par.min_vertices, par.max_vertices);
    const int nv = nv_dist(rng);

    // distribute the vertices over 2..nv layers with every layer inhabited:
    // few layers concentrate arrows and produce rich quadratic relation
    // spaces, many layers produce long chains and paths of higher degree
    std::uniform_int_distribution<int> layers_dist(2, nv);
    const int layers = layers_dist(rng);
    std::vector<int> level(nv);
    for (int x = 0; x < layers; ++x) level[x] = x;
    std::uniform_int_distribution<int> any_layer(0, layers - 1);
    for (int x = layers; x < nv; ++x) level[x] = any_layer(rng);
    std::shuffle(level.begin(), level.end(), rng);
    std::vector<std::pair<int, int>> candidates;
    for (int x = 0; x < nv; ++x)
        for (int y = 0; y < nv; ++y)
            if (level[y] == level[x] + 1) candidates.emplace_back(x, y);

    Quiver q;
    for (int x = 0; x < nv; ++x) q.add_vertex(fmt::format("v{}", x));
    std::uniform_int_distribution<int> na_dist(1, par.max_arrows);
    std::uniform_int_distribution<int> coin(0, 2);
    const int na = na_dist(rng);
    std::vector<int> targets; // heads of arrows placed so far
    for (int a = 0; a < na; ++a) {
        // two thirds of the time try to continue an existing arrow so that
        // composable pairs (and hence nonzero quadratic path spaces) are
        // common
        std::vector<std::pair<int, int>> extend;
        for (const auto& c : candidates)
            if (std::find(targets.begin(), targets.end(), c.first) != targets.end())
                extend.push_back(c);
        const auto& pool = (!extend.empty() && coin(rng) != 0) ? extend : candidates;
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        auto [x, y] = pool[pick(rng)];
        q.add_arrow(fmt::format("a{}", a), q.vertex_name(x), q.vertex_name(y));
        targets.push_back(y);
    }

    std::uniform_int_distribution<std::int64_t> coef(0, f.p - 1);
    std::map<std::pair<int, int>, Subspace<GF>> r2;
    for (int x = 0; x < nv; ++x)
        for (int y = 0; y < nv; ++y) {
            const int m = static_cast<int>(paths(q, x, y, 2).size());
            if (m == 0) continue;
            std::uniform_int_distribution<int> rdim(0, m);
            const int r = rdim(rng);
            if (r == 0) continue;
            Matrix<GF> rows(f, r, m);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < m; ++j) rows(i, j) = coef(rng);
            auto sub = Subspace<GF>::from_rows(rows);
            if (sub.dim() > 0) r2[{x, y}] = std::move(sub);
        }
    return Presentation<GF>::create(std::move(q), f, std::move(r2));
}

} // namespace qk::gen
