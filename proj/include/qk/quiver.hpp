#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "qk/common.hpp"

/*
 * Finite quivers with deterministic path enumeration.  Vertices and arrows
 * are kept in declaration order; paths are stored in traversal order
 * (first-applied arrow first) and printed in composition order
 * (last-applied first, `c*b*a`), so the printed form matches the usual
 * right-to-left convention for composing arrows.
 */
namespace qk {

struct Arrow {
    std::string name;
    int src, tgt;
    bool operator==(const Arrow&) const = default;
};

class Quiver {
public:
    void add_vertex(const std::string& name) {
        if (vindex_.count(name)) throw ParseError(fmt::format("duplicate vertex '{}'", name));
        vindex_[name] = static_cast<int>(verts_.size());
        verts_.push_back(name);
    }

    void add_arrow(const std::string& name, const std::string& src, const std::string& tgt) {
        if (aindex_.count(name)) throw ParseError(fmt::format("duplicate arrow '{}'", name));
        aindex_[name] = static_cast<int>(arrows_.size());
        arrows_.push_back({name, vertex(src), vertex(tgt)});
    }

    int num_vertices() const { return static_cast<int>(verts_.size()); }
    int num_arrows() const { return static_cast<int>(arrows_.size()); }
    const std::string& vertex_name(int x) const { return verts_.at(x); }
    const Arrow& arrow(int a) const { return arrows_.at(a); }

    int vertex(const std::string& name) const {
        auto it = vindex_.find(name);
        if (it == vindex_.end()) throw ParseError(fmt::format("unknown vertex '{}'", name));
        return it->second;
    }
    int arrow_index(const std::string& name) const {
        auto it = aindex_.find(name);
        if (it == aindex_.end()) throw ParseError(fmt::format("unknown arrow '{}'", name));
        return it->second;
    }
    bool has_vertex(const std::string& name) const { return vindex_.count(name) != 0; }

    /* Arrow indices with source x, ascending. */
    std::vector<int> arrows_from(int x) const {
        std::vector<int> out;
        for (int a = 0; a < num_arrows(); ++a)
            if (arrows_[a].src == x) out.push_back(a);
        return out;
    }
    /* Arrow indices x -> y, ascending. */
    std::vector<int> arrows_between(int x, int y) const {
        std::vector<int> out;
        for (int a = 0; a < num_arrows(); ++a)
            if (arrows_[a].src == x && arrows_[a].tgt == y) out.push_back(a);
        return out;
    }

    /* Same vertices; each arrow alpha: x -> y becomes y -> x, keeping the
     * declaration order and names.  An involution. */
    Quiver opposite() const {
        Quiver q;
        q.verts_ = verts_;
        q.vindex_ = vindex_;
        for (const auto& a : arrows_) {
            q.aindex_[a.name] = static_cast<int>(q.arrows_.size());
            q.arrows_.push_back({a.name, a.tgt, a.src});
        }
        return q;
    }

    bool operator==(const Quiver& o) const { return verts_ == o.verts_ && arrows_ == o.arrows_; }

private:
    std::vector<std::string> verts_;
    std::vector<Arrow> arrows_;
    std::map<std::string, int> vindex_, aindex_;
};

/* A path stored in traversal order: arrows[0] is applied first. */
struct Path {
    int src, tgt;
    std::vector<int> arrows;

    int length() const { return static_cast<int>(arrows.size()); }
    bool operator==(const Path&) const = default;
    /* canonical order: lex on the arrow-index sequence */
    bool operator<(const Path& o) const { return arrows < o.arrows; }
};

inline std::string path_str(const Quiver& q, const Path& p) {
    if (p.arrows.empty()) return fmt::format("e_{}", q.vertex_name(p.src));
    std::string s;
    for (auto it = p.arrows.rbegin(); it != p.arrows.rend(); ++it) {
        if (!s.empty()) s += "*";
        s += q.arrow(*it).name;
    }
    return s;
}

/* All length-n paths x -> y in lex order on arrow-index sequences.  The
 * depth-first walk picks arrows in ascending index, so results come out
 * already sorted.  Throws PathExplosion when more than `cap` paths (or
 * search nodes) would be produced. */
inline std::vector<Path> paths(const Quiver& q, int x, int y, int n, long long cap = 100000) {
    if (n < 0) return {};
    std::vector<Path> out;
    long long visited = 0;
    std::vector<int> word;
    auto dfs = [&](auto&& self, int at, int remaining) -> void {
        if (++visited > 4 * cap)
            throw PathExplosion(fmt::format("path search exceeded {} nodes", 4 * cap));
        if (remaining == 0) {
            if (at == y) {
                out.push_back({x, y, word});
                if (static_cast<long long>(out.size()) > cap)
                    throw PathExplosion(fmt::format("more than {} paths from {} to {} of length {}",
                                                    cap, q.vertex_name(x), q.vertex_name(y), n));
            }
            return;
        }
        for (int a = 0; a < q.num_arrows(); ++a) {
            if (q.arrow(a).src != at) continue;
            word.push_back(a);
            self(self, q.arrow(a).tgt, remaining - 1);
            word.pop_back();
        }
    };
    dfs(dfs, x, n);
    return out;
}

/* Concatenation: `first` then `second` (so the composite is second o first). */
inline Path concat(const Path& first, const Path& second) {
    if (first.tgt != second.src)
        throw ComposeMismatch("path concatenation endpoints do not match");
    Path p{first.src, second.tgt, first.arrows};
    p.arrows.insert(p.arrows.end(), second.arrows.begin(), second.arrows.end());
    return p;
}

struct Grading {
    std::vector<long long> level; // per vertex

    bool operator==(const Grading&) const = default;
};

/* Assign integer levels so that every arrow raises the level by one.
 * BFS over the underlying graph, one component at a time, starting from the
 * least-index unvisited vertex at level 0.  Throws NotGradable when some
 * undirected cycle has nonzero net level change (e.g. any loop). */
inline Grading infer_grading(const Quiver& q) {
    const int nv = q.num_vertices();
    Grading g{std::vector<long long>(nv, 0)};
    std::vector<bool> seen(nv, false);
    for (int root = 0; root < nv; ++root) {
        if (seen[root]) continue;
        seen[root] = true;
        g.level[root] = 0;
        std::vector<int> queue{root};
        for (size_t h = 0; h < queue.size(); ++h) {
            int x = queue[h];
            for (int a = 0; a < q.num_arrows(); ++a) {
                const auto& ar = q.arrow(a);
                int other = -1;
                long long lvl = 0;
                if (ar.src == x) { other = ar.tgt; lvl = g.level[x] + 1; }
                else if (ar.tgt == x) { other = ar.src; lvl = g.level[x] - 1; }
                else continue;
                if (!seen[other]) {
                    seen[other] = true;
                    g.level[other] = lvl;
                    queue.push_back(other);
                } else if (g.level[other] != lvl) {
                    throw NotGradable(fmt::format(
                        "arrow '{}' forces level({}) = {} but it is already {}", ar.name,
                        q.vertex_name(other), lvl, g.level[other]));
                }
            }
        }
    }
    return g;
}

inline bool is_gradable(const Quiver& q) {
    try {
        infer_grading(q);
        return true;
    } catch (const NotGradable&) {
        return false;
    }
}

} // namespace qk
