#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "qk/quiver.hpp"
#include "qk/subspace.hpp"

/*
 * Quadratic bound quiver presentations Lambda = kQ/R.
 *
 * R is generated by, per vertex pair (x,y), a subspace R_2(x,y) of the span
 * of length-2 paths x -> y in the canonical (lex) path basis.  Everything
 * degreewise is derived lazily and memoized: the graded pieces R_n(x,y) of
 * the ideal, the intersection spaces R^(n)(a,x) (every way of inserting the
 * quadratic generators), the graded components e_y Lambda_n e_x with
 * deterministic coset representatives, and multiplication.
 *
 * Presentations are immutable and handled through shared_ptr; the caches
 * sit behind a mutex, so all queries are observationally pure and
 * thread-safe.
 */
namespace qk {

/* The graded piece e_y Lambda_n e_x: span of length-n paths x -> y modulo
 * R_n(x,y), with coset representatives the non-pivot paths. */
template <class F>
struct GradedComponent {
    int x, y, n;
    int quotient_dim;
    Subspace<F> rel_space;        // R_n(x,y) in path coordinates
    std::vector<Path> coset_reps; // non-pivot paths, lex order
    std::vector<int> coset_cols;  // their column indices in the path basis
};

/* An element of e_y Lambda_n e_x in coset-representative coordinates. */
template <class F>
struct AlgebraElement {
    int src, tgt, n;
    std::vector<typename F::elem> coords;
};

template <class F>
class Presentation : public std::enable_shared_from_this<Presentation<F>> {
public:
    using Ptr = std::shared_ptr<const Presentation<F>>;
    using E = typename F::elem;

    static Ptr create(Quiver q, F field, std::map<std::pair<int, int>, Subspace<F>> r2,
                      long long path_cap = 100000) {
        auto p = Ptr(new Presentation(std::move(q), field, std::move(r2), path_cap));
        for (const auto& [key, sub] : p->r2_) {
            const auto expected = static_cast<int>(paths(p->q_, key.first, key.second, 2).size());
            if (sub.ambient_dim() != expected)
                throw DimensionMismatch(fmt::format(
                    "R_2({},{}) lives in a {}-dim path space but has ambient {}",
                    p->q_.vertex_name(key.first), p->q_.vertex_name(key.second), expected,
                    sub.ambient_dim()));
        }
        return p;
    }

    const Quiver& quiver() const { return q_; }
    const F& field() const { return f_; }
    long long path_cap() const { return cap_; }

    /* R_2(x,y); absent keys mean the zero subspace. */
    Subspace<F> r2(int x, int y) const {
        auto it = r2_.find({x, y});
        if (it != r2_.end()) return it->second;
        return Subspace<F>::zero(f_, static_cast<int>(paths_between(x, y, 2).size()));
    }
    const std::map<std::pair<int, int>, Subspace<F>>& r2_map() const { return r2_; }

    const std::vector<Path>& paths_between(int x, int y, int n) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto key = std::tuple{x, y, n};
        auto it = paths_.find(key);
        if (it == paths_.end()) it = paths_.emplace(key, paths(q_, x, y, n, cap_)).first;
        return it->second;
    }

    int path_index(int x, int y, int n, const Path& p) const {
        const auto& ps = paths_between(x, y, n);
        auto it = std::lower_bound(ps.begin(), ps.end(), p);
        if (it == ps.end() || !(*it == p))
            throw ComposeMismatch(fmt::format("path {} is not a length-{} path {} -> {}",
                                              path_str(q_, p), n, q_.vertex_name(x),
                                              q_.vertex_name(y)));
        return static_cast<int>(it - ps.begin());
    }

    /* R_n(x,y) = sum over j of kQ_{n-2-j} * R_2 * kQ_j, inside kQ_n(x,y). */
    Subspace<F> relation_space(int x, int y, int n) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto key = std::tuple{x, y, n};
        auto it = rel_.find(key);
        if (it != rel_.end()) return it->second;
        Subspace<F> out = Subspace<F>::zero(f_, static_cast<int>(paths_between(x, y, n).size()));
        for (int j = 0; j + 2 <= n; ++j) out = subspace_sum(out, position_space(x, y, n, j));
        rel_.emplace(key, out);
        return out;
    }

    /* R^(n)(a,x) = intersection over j of kQ_{n-2-j} * R_2 * kQ_j; the full
     * path space for n in {0,1}. */
    Subspace<F> coideal_space(int a, int x, int n) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto key = std::tuple{a, x, n};
        auto it = coideal_.find(key);
        if (it != coideal_.end()) return it->second;
        const int ambient = static_cast<int>(paths_between(a, x, n).size());
        Subspace<F> out = Subspace<F>::full(f_, ambient);
        for (int j = 0; j + 2 <= n; ++j)
            out = subspace_intersect(out, position_space(a, x, n, j));
        coideal_.emplace(key, out);
        return out;
    }

    const GradedComponent<F>& component(int x, int y, int n) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto key = std::tuple{x, y, n};
        auto it = comp_.find(key);
        if (it != comp_.end()) return it->second;
        GradedComponent<F> c;
        c.x = x; c.y = y; c.n = n;
        c.rel_space = relation_space(x, y, n);
        const auto& ps = paths_between(x, y, n);
        auto piv = c.rel_space.pivots();
        size_t pi = 0;
        for (int t = 0; t < static_cast<int>(ps.size()); ++t) {
            if (pi < piv.size() && piv[pi] == t) { ++pi; continue; }
            c.coset_reps.push_back(ps[t]);
            c.coset_cols.push_back(t);
        }
        c.quotient_dim = static_cast<int>(c.coset_reps.size());
        return comp_.emplace(key, std::move(c)).first->second;
    }

    /* Reduce a path-basis vector mod R_n(x,y) to coset coordinates. */
    std::vector<E> reduce(int x, int y, int n, std::vector<E> v) const {
        const auto& c = component(x, y, n);
        const auto& rel = c.rel_space.basis();
        auto piv = c.rel_space.pivots();
        for (int r = 0; r < rel.rows(); ++r) {
            const E t = v[piv[r]];
            if (f_.is_zero(t)) continue;
            for (int j = 0; j < rel.cols(); ++j) v[j] = f_.sub(v[j], f_.mul(t, rel(r, j)));
        }
        std::vector<E> coords(c.quotient_dim, f_.zero());
        for (int t = 0; t < c.quotient_dim; ++t) coords[t] = v[c.coset_cols[t]];
        return coords;
    }

    /* Coset coordinates back to a path-basis representative. */
    std::vector<E> embed(int x, int y, int n, const std::vector<E>& coords) const {
        const auto& c = component(x, y, n);
        std::vector<E> v(paths_between(x, y, n).size(), f_.zero());
        for (int t = 0; t < c.quotient_dim; ++t) v[c.coset_cols[t]] = coords[t];
        return v;
    }

    AlgebraElement<F> unit(int x) const {
        return element_of_path(Path{x, x, {}});
    }

    AlgebraElement<F> arrow_element(int a) const {
        const auto& ar = q_.arrow(a);
        return element_of_path(Path{ar.src, ar.tgt, {a}});
    }

    AlgebraElement<F> element_of_path(const Path& p) const {
        std::vector<E> v(paths_between(p.src, p.tgt, p.length()).size(), f_.zero());
        v[path_index(p.src, p.tgt, p.length(), p)] = f_.one();
        return {p.src, p.tgt, p.length(), reduce(p.src, p.tgt, p.length(), std::move(v))};
    }

    /* u * v (v applied first): requires src(u) == tgt(v). */
    AlgebraElement<F> multiply(const AlgebraElement<F>& u, const AlgebraElement<F>& v) const {
        if (u.src != v.tgt)
            throw ComposeMismatch(fmt::format("cannot compose: u starts at {} but v ends at {}",
                                              q_.vertex_name(u.src), q_.vertex_name(v.tgt)));
        const int n = u.n + v.n;
        const auto& cu = component(u.src, u.tgt, u.n);
        const auto& cv = component(v.src, v.tgt, v.n);
        std::vector<E> acc(paths_between(v.src, u.tgt, n).size(), f_.zero());
        for (int i = 0; i < cu.quotient_dim; ++i) {
            if (f_.is_zero(u.coords[i])) continue;
            for (int j = 0; j < cv.quotient_dim; ++j) {
                if (f_.is_zero(v.coords[j])) continue;
                const auto w = concat(cv.coset_reps[j], cu.coset_reps[i]);
                const int t = path_index(v.src, u.tgt, n, w);
                acc[t] = f_.add(acc[t], f_.mul(u.coords[i], v.coords[j]));
            }
        }
        return {v.src, u.tgt, n, reduce(v.src, u.tgt, n, std::move(acc))};
    }

    /* The opposite presentation kQ^o / R^o (relations transported along
     * rho -> rho^o).  Cached; the opposite of the opposite is the original
     * object, so duality round trips land on the same instance. */
    Ptr opposite() const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (op_) return op_;
        auto qo = q_.opposite();
        std::map<std::pair<int, int>, Subspace<F>> r2o;
        for (const auto& [key, sub] : r2_)
            r2o[{key.second, key.first}] = transport_to_opposite(qo, key.first, key.second, sub);
        auto o = std::shared_ptr<Presentation>(
            new Presentation(std::move(qo), f_, std::move(r2o), cap_));
        o->op_ = this->shared_from_this();
        op_ = o;
        return op_;
    }

    /* Quadratic dual: the presentation kQ^o / R^!, where R^!_2(y,x) is the
     * orthogonal complement of R_2(x,y) in the dual path basis, transported
     * along rho -> rho^o.  Always computed from scratch (no identification
     * shortcuts), so the double dual genuinely reproduces R_2. */
    Ptr quadratic_dual() const {
        auto qo = q_.opposite();
        std::map<std::pair<int, int>, Subspace<F>> rdual;
        for (int x = 0; x < q_.num_vertices(); ++x)
            for (int y = 0; y < q_.num_vertices(); ++y) {
                const int m = static_cast<int>(paths_between(x, y, 2).size());
                if (m == 0) continue;
                auto perp = orthogonal_complement(r2(x, y));
                if (perp.dim() == 0) continue;
                rdual[{y, x}] = transport_to_opposite(qo, x, y, perp);
            }
        return create(std::move(qo), f_, std::move(rdual), cap_);
    }

private:
    Presentation(Quiver q, F f, std::map<std::pair<int, int>, Subspace<F>> r2, long long cap)
        : q_(std::move(q)), f_(f), r2_(std::move(r2)), cap_(cap) {}

    /* Span of kQ_{n-2-j}(b,y) * R_2(a,b) * kQ_j(x,a) over all (a,b),
     * embedded in kQ_n(x,y). */
    Subspace<F> position_space(int x, int y, int n, int j) const {
        const auto& amb_paths = paths_between(x, y, n);
        const int ambient = static_cast<int>(amb_paths.size());
        std::vector<std::vector<E>> rows;
        for (const auto& [key, sub] : r2_) {
            const auto [a, b] = key;
            if (sub.dim() == 0) continue;
            const auto& mids = paths_between(a, b, 2);
            for (const auto& delta : paths_between(x, a, j)) {
                for (const auto& zeta : paths_between(b, y, n - 2 - j)) {
                    for (int r = 0; r < sub.dim(); ++r) {
                        std::vector<E> row(ambient, f_.zero());
                        for (int t = 0; t < static_cast<int>(mids.size()); ++t) {
                            if (f_.is_zero(sub.basis()(r, t))) continue;
                            const auto w = concat(concat(delta, mids[t]), zeta);
                            row[path_index(x, y, n, w)] = sub.basis()(r, t);
                        }
                        rows.push_back(std::move(row));
                    }
                }
            }
        }
        Matrix<F> m(f_, static_cast<int>(rows.size()), ambient);
        for (int i = 0; i < m.rows(); ++i)
            for (int t = 0; t < ambient; ++t) m(i, t) = rows[i][t];
        return Subspace<F>::from_rows(m);
    }

    /* Carry a subspace of kQ_2(x,y) to kQ^o_2(y,x): path (i then k) maps to
     * (k then i) with the same arrow indices; lex positions permute. */
    Subspace<F> transport_to_opposite(const Quiver& qo, int x, int y,
                                      const Subspace<F>& sub) const {
        const auto& fwd = paths_between(x, y, 2);
        auto rev = paths(qo, y, x, 2, cap_);
        Matrix<F> rows(f_, sub.dim(), static_cast<int>(rev.size()));
        for (int t = 0; t < static_cast<int>(fwd.size()); ++t) {
            Path po{y, x, {fwd[t].arrows[1], fwd[t].arrows[0]}};
            auto it = std::lower_bound(rev.begin(), rev.end(), po);
            const int to = static_cast<int>(it - rev.begin());
            for (int r = 0; r < sub.dim(); ++r) rows(r, to) = sub.basis()(r, t);
        }
        return Subspace<F>::from_rows(rows);
    }

    Quiver q_;
    F f_;
    std::map<std::pair<int, int>, Subspace<F>> r2_;
    long long cap_;

    mutable std::recursive_mutex mu_;
    mutable std::map<std::tuple<int, int, int>, std::vector<Path>> paths_;
    mutable std::map<std::tuple<int, int, int>, Subspace<F>> rel_, coideal_;
    mutable std::map<std::tuple<int, int, int>, GradedComponent<F>> comp_;
    mutable Ptr op_; // deliberate shared_ptr cycle with the opposite; presentations
                     // are few and live for the whole run
};

/* Both sides of the degreewise perp identity:
 * dim R^!_n(y,x) (in the dual) vs |Q_n(x,y)| - dim R^(n)(x,y). */
struct PerpReport {
    int lhs_dim, rhs_dim;
    bool equal;
};

template <class F>
PerpReport verify_perp(const Presentation<F>& p, const Presentation<F>& dual, int x, int y,
                       int n) {
    const int lhs = dual.relation_space(y, x, n).dim();
    const int rhs = static_cast<int>(p.paths_between(x, y, n).size()) -
                    p.coideal_space(x, y, n).dim();
    return {lhs, rhs, lhs == rhs};
}

template <class F>
PerpReport verify_perp(const Presentation<F>& p, int x, int y, int n) {
    return verify_perp(p, *p.quadratic_dual(), x, y, n);
}

} // namespace qk
