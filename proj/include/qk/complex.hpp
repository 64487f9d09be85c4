#pragma once

#include <algorithm>
#include <map>
#include <numeric>

#include "qk/rep.hpp"

/*
 * Windowed cochain complexes of representations.
 *
 * A complex stores terms for every degree in [lo, hi] and differentials
 * d^n: X^n -> X^{n+1} for lo <= n < hi.  Each end of the window carries a
 * flag: closed means the complex is provably zero beyond that end, open
 * means it was truncated there.  Cohomology at a degree that needs an
 * unknown differential beyond an open end raises OpenWindow.
 *
 * Terms may carry block metadata (tag + origin coordinates) recording how
 * they were assembled from direct sums; structural equality of cones and
 * total complexes is checked blockwise after sorting on those keys.
 */
namespace qk {

struct Block {
    int tag = 0;           // 0 = source side, 1 = target side of a cone
    int oi = 0, oj = 0;    // origin coordinates in the double complex
    std::vector<int> dims; // per-vertex dimensions of this summand

    std::array<int, 3> key() const { return {tag, oi, oj}; }
};

template <class F>
struct Complex {
    typename Presentation<F>::Ptr pres;
    int lo = 0, hi = -1; // empty window when hi < lo
    bool lo_closed = true, hi_closed = true;
    std::map<int, Rep<F>> terms;
    std::map<int, RepMor<F>> diffs; // n -> d^n, stored for lo <= n < hi
    std::map<int, std::vector<Block>> blocks; // optional assembly metadata

    bool in_window(int n) const { return lo <= n && n <= hi; }

    Rep<F> term_or_zero(int n) const {
        auto it = terms.find(n);
        if (it != terms.end()) return it->second;
        return zero_rep<F>(pres);
    }

    bool has_blocks() const { return !blocks.empty(); }

    /* d^n as a stored or implicit-zero morphism; OpenWindow when the
     * window was truncated on the side that would determine it. */
    RepMor<F> diff_or_zero(int n) const {
        auto it = diffs.find(n);
        if (it != diffs.end()) return it->second;
        if (n >= hi && !hi_closed)
            throw OpenWindow(fmt::format("differential at degree {} lies beyond the open upper end {}", n, hi));
        if (n < lo && !lo_closed)
            throw OpenWindow(fmt::format("differential at degree {} lies beyond the open lower end {}", n, lo));
        return zero_morphism(term_or_zero(n), term_or_zero(n + 1));
    }
};

template <class F>
Complex<F> make_complex(typename Presentation<F>::Ptr pres, int lo,
                        std::vector<Rep<F>> terms, std::vector<RepMor<F>> diffs,
                        bool lo_closed = true, bool hi_closed = true,
                        std::map<int, std::vector<Block>> blocks = {}) {
    Complex<F> c;
    c.pres = std::move(pres);
    c.lo = lo;
    c.hi = lo + static_cast<int>(terms.size()) - 1;
    c.lo_closed = lo_closed;
    c.hi_closed = hi_closed;
    c.blocks = std::move(blocks);
    if (static_cast<int>(diffs.size()) != std::max<int>(0, static_cast<int>(terms.size()) - 1))
        throw ShapeMismatch("need exactly one differential between consecutive terms");
    for (size_t t = 0; t < terms.size(); ++t) c.terms.emplace(lo + static_cast<int>(t), std::move(terms[t]));
    for (size_t t = 0; t < diffs.size(); ++t) {
        const int n = lo + static_cast<int>(t);
        if (!is_valid_morphism(c.terms.at(n), c.terms.at(n + 1), diffs[t]))
            throw ShapeMismatch(fmt::format("differential at degree {} is not a morphism", n));
        c.diffs.emplace(n, std::move(diffs[t]));
    }
    for (int n = c.lo; n + 1 < c.hi; ++n) {
        auto dd = compose(c.diffs.at(n + 1), c.diffs.at(n));
        if (!mor_is_zero(dd))
            throw ShapeMismatch(fmt::format("d^2 != 0 between degrees {} and {}", n, n + 2));
    }
    return c;
}

template <class F>
Complex<F> zero_complex(typename Presentation<F>::Ptr pres) {
    Complex<F> c;
    c.pres = std::move(pres);
    return c;
}

template <class F>
Complex<F> stalk_complex(const Rep<F>& m, int degree) {
    Complex<F> c;
    c.pres = m.pres;
    c.lo = c.hi = degree;
    c.terms.emplace(degree, m);
    return c;
}

/* X[k]^n = X^{n+k}; each shift negates the differential. */
template <class F>
Complex<F> shift(const Complex<F>& c, int k) {
    Complex<F> s;
    s.pres = c.pres;
    s.lo = c.lo - k;
    s.hi = c.hi - k;
    s.lo_closed = c.lo_closed;
    s.hi_closed = c.hi_closed;
    const bool flip = (k % 2) != 0;
    for (const auto& [n, t] : c.terms) s.terms.emplace(n - k, t);
    for (const auto& [n, d] : c.diffs) s.diffs.emplace(n - k, flip ? mor_negate(d) : d);
    for (const auto& [n, b] : c.blocks) s.blocks.emplace(n - k, b);
    return s;
}

/* The twist: same terms, negated differential; isomorphic to the original
 * via (-1)^n on degree n. */
template <class F>
Complex<F> twist(const Complex<F>& c) {
    Complex<F> t = c;
    for (auto& [n, d] : t.diffs) d = mor_negate(d);
    return t;
}

/* Pad a closed end with zero terms so windows can be aligned. */
template <class F>
Complex<F> pad_window(const Complex<F>& c, int lo, int hi) {
    if (lo > c.lo || hi < c.hi) throw ShapeMismatch("pad_window cannot shrink the window");
    if (lo < c.lo && !c.lo_closed) throw OpenWindow("cannot pad past an open lower end");
    if (hi > c.hi && !c.hi_closed) throw OpenWindow("cannot pad past an open upper end");
    if (c.hi < c.lo) { // empty complex
        Complex<F> p = c;
        p.lo = lo;
        p.hi = hi;
        for (int n = lo; n <= hi; ++n) p.terms.emplace(n, zero_rep<F>(c.pres));
        for (int n = lo; n < hi; ++n) p.diffs.emplace(n, zero_morphism(p.terms.at(n), p.terms.at(n + 1)));
        return p;
    }
    Complex<F> p = c;
    for (int n = lo; n < c.lo; ++n) p.terms.emplace(n, zero_rep<F>(c.pres));
    for (int n = c.hi + 1; n <= hi; ++n) p.terms.emplace(n, zero_rep<F>(c.pres));
    p.lo = lo;
    p.hi = hi;
    for (int n = lo; n < hi; ++n)
        if (!p.diffs.count(n)) p.diffs.emplace(n, zero_morphism(p.terms.at(n), p.terms.at(n + 1)));
    return p;
}

/* ---- morphisms of complexes --------------------------------------------- */

template <class F>
struct ComplexMor {
    std::map<int, RepMor<F>> mats; // per degree, on the shared window
};

template <class F>
ComplexMor<F> make_complex_morphism(const Complex<F>& x, const Complex<F>& y,
                                    std::map<int, RepMor<F>> mats) {
    if (x.lo != y.lo || x.hi != y.hi || x.lo_closed != y.lo_closed || x.hi_closed != y.hi_closed)
        throw ShapeMismatch("complex morphism requires matching windows");
    ComplexMor<F> f;
    for (int n = x.lo; n <= x.hi; ++n) {
        auto it = mats.find(n);
        RepMor<F> fn = (it != mats.end()) ? it->second : zero_morphism(x.terms.at(n), y.terms.at(n));
        if (!is_valid_morphism(x.terms.at(n), y.terms.at(n), fn))
            throw ShapeMismatch(fmt::format("component at degree {} is not a morphism", n));
        f.mats.emplace(n, std::move(fn));
    }
    for (int n = x.lo; n < x.hi; ++n) {
        auto lhs = compose(f.mats.at(n + 1), x.diffs.at(n));
        auto rhs = compose(y.diffs.at(n), f.mats.at(n));
        if (!mor_equal(lhs, rhs))
            throw ShapeMismatch(fmt::format("morphism does not commute with d at degree {}", n));
    }
    return f;
}

template <class F>
ComplexMor<F> identity_complex_morphism(const Complex<F>& x) {
    ComplexMor<F> f;
    for (const auto& [n, t] : x.terms) f.mats.emplace(n, identity_morphism(t));
    return f;
}

template <class F>
ComplexMor<F> zero_complex_morphism(const Complex<F>& x, const Complex<F>& y) {
    ComplexMor<F> f;
    for (int n = x.lo; n <= x.hi; ++n)
        f.mats.emplace(n, zero_morphism(x.terms.at(n), y.terms.at(n)));
    return f;
}

/* ---- mapping cone -------------------------------------------------------- */

/* C_f^n = X^{n+1} (+) Y^n with d = [[-d_X, 0], [f, d_Y]].  Sides stay
 * closed only when both inputs are closed there.  Block metadata tags the
 * X part 0 and the Y part 1 when both inputs carry all-zero tags. */
template <class F>
Complex<F> mapping_cone(const Complex<F>& x, const Complex<F>& y, const ComplexMor<F>& f) {
    if (x.lo != y.lo || x.hi != y.hi || x.lo_closed != y.lo_closed || x.hi_closed != y.hi_closed)
        throw ShapeMismatch("mapping cone requires matching windows");
    const F& fld = x.pres->field();
    Complex<F> c;
    c.pres = x.pres;
    c.lo = x.lo - 1;
    c.hi = x.hi;
    c.lo_closed = x.lo_closed;
    c.hi_closed = x.hi_closed;

    for (int n = c.lo; n <= c.hi; ++n) {
        auto xt = x.term_or_zero(n + 1);
        auto yt = y.term_or_zero(n);
        c.terms.emplace(n, direct_sum<F>(x.pres, {xt, yt}));
    }
    for (int n = c.lo; n < c.hi; ++n) {
        const auto& src = c.terms.at(n);
        const auto& tgt = c.terms.at(n + 1);
        auto xs = x.term_or_zero(n + 1);
        auto ys = y.term_or_zero(n);
        auto xt = x.term_or_zero(n + 2);
        RepMor<F> d;
        for (size_t v = 0; v < src.dims.size(); ++v)
            d.mats.push_back(Matrix<F>(fld, tgt.dims[v], src.dims[v]));
        const int nv = static_cast<int>(src.dims.size());
        auto dx = (n + 1 < x.hi) ? x.diffs.at(n + 1)
                                  : zero_morphism(xs, xt);
        auto dy = (n >= y.lo && n < y.hi) ? y.diffs.at(n)
                                          : zero_morphism(ys, y.term_or_zero(n + 1));
        for (int v = 0; v < nv; ++v) {
            d.mats[v].set_block(0, 0, dx.mats[v].negate());
            if (n + 1 >= x.lo && n + 1 <= x.hi) {
                auto it = f.mats.find(n + 1);
                if (it != f.mats.end()) d.mats[v].set_block(xt.dims[v], 0, it->second.mats[v]);
            }
            d.mats[v].set_block(xt.dims[v], xs.dims[v], dy.mats[v]);
        }
        c.diffs.emplace(n, std::move(d));
    }

    auto plain = [](const Complex<F>& z) {
        for (const auto& [n, bl] : z.blocks)
            for (const auto& b : bl)
                if (b.tag != 0) return false;
        return z.has_blocks();
    };
    if (plain(x) && plain(y)) {
        for (int n = c.lo; n <= c.hi; ++n) {
            std::vector<Block> bl;
            if (auto it = x.blocks.find(n + 1); it != x.blocks.end())
                for (auto b : it->second) { b.tag = 0; bl.push_back(std::move(b)); }
            if (auto it = y.blocks.find(n); it != y.blocks.end())
                for (auto b : it->second) { b.tag = 1; bl.push_back(std::move(b)); }
            c.blocks.emplace(n, std::move(bl));
        }
    }
    return c;
}

/* ---- cohomology ----------------------------------------------------------- */

struct CohomologyDims {
    std::vector<int> dims; // per vertex
    int total() const { return std::accumulate(dims.begin(), dims.end(), 0); }
    bool is_zero() const { return total() == 0; }
};

template <class F>
CohomologyDims cohomology_dims(const Complex<F>& c, int n) {
    const int nv = c.pres->quiver().num_vertices();
    if (n < c.lo) {
        if (!c.lo_closed) throw OpenWindow(fmt::format("degree {} lies beyond the open lower end", n));
        return {std::vector<int>(nv, 0)};
    }
    if (n > c.hi) {
        if (!c.hi_closed) throw OpenWindow(fmt::format("degree {} lies beyond the open upper end", n));
        return {std::vector<int>(nv, 0)};
    }
    auto dn = c.diff_or_zero(n);
    auto dprev = c.diff_or_zero(n - 1);
    CohomologyDims h;
    const auto& t = c.terms.at(n);
    for (int x = 0; x < nv; ++x)
        h.dims.push_back(t.dims[x] - rank(dn.mats[x]) - rank(dprev.mats[x]));
    return h;
}

/* Subquotient ker d^n / im d^{n-1} with its induced arrow actions. */
template <class F>
Rep<F> cohomology_rep(const Complex<F>& c, int n) {
    const int nv = c.pres->quiver().num_vertices();
    if (n < c.lo || n > c.hi) {
        cohomology_dims(c, n); // raises OpenWindow when not provably zero
        return zero_rep<F>(c.pres);
    }
    auto dn = c.diff_or_zero(n);
    auto dprev = c.diff_or_zero(n - 1);
    const auto xn = c.terms.at(n);
    const auto xnext = c.term_or_zero(n + 1);
    const auto xprev = c.term_or_zero(n - 1);
    auto z = kernel_rep(xn, xnext, dn);
    // factor d^{n-1} through the kernel inclusion
    RepMor<F> g;
    for (int x = 0; x < nv; ++x) {
        auto sol = solve_matrix(z.incl.mats[x], dprev.mats[x]);
        if (!sol) throw ShapeMismatch("image does not land in the kernel; d^2 != 0?");
        g.mats.push_back(std::move(*sol));
    }
    return cokernel_rep(xprev, z.rep, g).rep;
}

template <class F>
bool is_acyclic(const Complex<F>& c, int nlo, int nhi) {
    for (int n = nlo; n <= nhi; ++n)
        if (!cohomology_dims(c, n).is_zero()) return false;
    return true;
}

/* Cone acyclicity over every degree it determines: all of [lo-1, hi] when
 * the window is closed, shrunk by one at each open end. */
template <class F>
bool is_quasi_iso(const Complex<F>& x, const Complex<F>& y, const ComplexMor<F>& f) {
    auto c = mapping_cone(x, y, f);
    const int nlo = c.lo_closed ? c.lo : c.lo + 1;
    const int nhi = c.hi_closed ? c.hi : c.hi - 1;
    return is_acyclic(c, nlo, nhi);
}

/* ---- structural comparison ------------------------------------------------ */

template <class F>
bool rep_data_equal(const Rep<F>& a, const Rep<F>& b) {
    return a.dims == b.dims && a.act == b.act;
}

template <class F>
bool structurally_equal(const Complex<F>& a, const Complex<F>& b) {
    if (a.lo != b.lo || a.hi != b.hi || a.lo_closed != b.lo_closed || a.hi_closed != b.hi_closed)
        return false;
    for (int n = a.lo; n <= a.hi; ++n)
        if (!rep_data_equal(a.terms.at(n), b.terms.at(n))) return false;
    for (int n = a.lo; n < a.hi; ++n)
        if (!mor_equal(a.diffs.at(n), b.diffs.at(n))) return false;
    return true;
}

/* Coordinate order after sorting blocks by (tag, oi, oj): position ->
 * original coordinate, one list per vertex. */
inline std::vector<std::vector<int>> block_permutation(const std::vector<Block>& blocks, int nv) {
    std::vector<int> order(blocks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int p, int q) { return blocks[p].key() < blocks[q].key(); });
    std::vector<std::vector<int>> perm(nv);
    std::vector<int> offset(blocks.size(), 0);
    for (int x = 0; x < nv; ++x) {
        int off = 0;
        for (size_t b = 0; b < blocks.size(); ++b) { offset[b] = off; off += blocks[b].dims[x]; }
        for (int b : order)
            for (int t = 0; t < blocks[b].dims[x]; ++t) perm[x].push_back(offset[b] + t);
    }
    return perm;
}

/* Equality after normalizing the block order at every degree; differentials
 * are compared entrywise through the permutations, so the verdict is exact. */
template <class F>
bool equal_with_blocks(const Complex<F>& a, const Complex<F>& b) {
    if (a.lo != b.lo || a.hi != b.hi || a.lo_closed != b.lo_closed || a.hi_closed != b.hi_closed)
        return false;
    if (!a.has_blocks() || !b.has_blocks()) return false;
    const int nv = a.pres->quiver().num_vertices();

    std::map<int, std::vector<std::vector<int>>> pa, pb;
    for (int n = a.lo; n <= a.hi; ++n) {
        auto ba = a.blocks.count(n) ? a.blocks.at(n) : std::vector<Block>{};
        auto bb = b.blocks.count(n) ? b.blocks.at(n) : std::vector<Block>{};
        auto sa = ba, sb = bb;
        auto bykey = [](const Block& p, const Block& q) { return p.key() < q.key(); };
        std::sort(sa.begin(), sa.end(), bykey);
        std::sort(sb.begin(), sb.end(), bykey);
        if (sa.size() != sb.size()) return false;
        for (size_t t = 0; t < sa.size(); ++t)
            if (sa[t].key() != sb[t].key() || sa[t].dims != sb[t].dims) return false;
        pa.emplace(n, block_permutation(ba, nv));
        pb.emplace(n, block_permutation(bb, nv));
    }
    auto same_under = [&](const Matrix<F>& ma, const Matrix<F>& mb, const std::vector<int>& rowa,
                          const std::vector<int>& rowb, const std::vector<int>& cola,
                          const std::vector<int>& colb) {
        for (size_t r = 0; r < rowa.size(); ++r)
            for (size_t c = 0; c < cola.size(); ++c)
                if (!(ma(rowa[r], cola[c]) == mb(rowb[r], colb[c]))) return false;
        return true;
    };
    for (int n = a.lo; n <= a.hi; ++n) {
        const auto& ta = a.terms.at(n);
        const auto& tb = b.terms.at(n);
        if (ta.dims != tb.dims) return false;
        for (int ar = 0; ar < a.pres->quiver().num_arrows(); ++ar) {
            const auto& arr = a.pres->quiver().arrow(ar);
            if (!same_under(ta.act[ar], tb.act[ar], pa.at(n)[arr.tgt], pb.at(n)[arr.tgt],
                            pa.at(n)[arr.src], pb.at(n)[arr.src]))
                return false;
        }
        if (n < a.hi) {
            const auto& da = a.diffs.at(n);
            const auto& db = b.diffs.at(n);
            for (int x = 0; x < nv; ++x)
                if (!same_under(da.mats[x], db.mats[x], pa.at(n + 1)[x], pb.at(n + 1)[x],
                                pa.at(n)[x], pb.at(n)[x]))
                    return false;
        }
    }
    return true;
}

} // namespace qk
