#pragma once

#include "qk/complex.hpp"

/*
 * Windowed double complexes: terms M^{i,j} on a rectangle, horizontal
 * differentials h^{i,j}: M^{i,j} -> M^{i+1,j}, verticals
 * v^{i,j}: M^{i,j} -> M^{i,j+1}.  Rows and columns must square to zero and
 * every square must anticommute, v o h + h o v = 0; this is the convention
 * that makes the signless total differential square to zero.
 *
 * The total complex collapses diagonals i+j = n with blocks ordered by
 * ascending column index; horizontal/vertical cones mirror the mapping
 * cone along one direction, and the assembly lemma turns rowwise or
 * columnwise acyclicity into acyclicity of the total complex.
 */
namespace qk {

template <class F>
struct DoubleComplex {
    typename Presentation<F>::Ptr pres;
    int ilo = 0, ihi = -1, jlo = 0, jhi = -1;
    bool left_closed = true, right_closed = true, bottom_closed = true, top_closed = true;
    std::map<std::pair<int, int>, Rep<F>> terms;
    std::map<std::pair<int, int>, RepMor<F>> horiz; // (i,j) -> h^{i,j}, for i < ihi
    std::map<std::pair<int, int>, RepMor<F>> vert;  // (i,j) -> v^{i,j}, for j < jhi
    std::map<std::pair<int, int>, std::vector<Block>> blocks;

    bool all_closed() const { return left_closed && right_closed && bottom_closed && top_closed; }

    Rep<F> term_or_zero(int i, int j) const {
        auto it = terms.find({i, j});
        return it != terms.end() ? it->second : zero_rep<F>(pres);
    }
    RepMor<F> horiz_or_zero(int i, int j) const {
        auto it = horiz.find({i, j});
        if (it != horiz.end()) return it->second;
        return zero_morphism(term_or_zero(i, j), term_or_zero(i + 1, j));
    }
    RepMor<F> vert_or_zero(int i, int j) const {
        auto it = vert.find({i, j});
        if (it != vert.end()) return it->second;
        return zero_morphism(term_or_zero(i, j), term_or_zero(i, j + 1));
    }
    std::vector<Block> blocks_at(int i, int j) const {
        auto it = blocks.find({i, j});
        return it != blocks.end() ? it->second : std::vector<Block>{};
    }
};

/* Fill implicit zero terms/maps, then check shapes, h^2 = 0, v^2 = 0, and
 * anticommutation of every square.  A square with the wrong sign is
 * rejected here, not later. */
template <class F>
void validate_dcomplex(DoubleComplex<F>& d) {
    for (int i = d.ilo; i <= d.ihi; ++i)
        for (int j = d.jlo; j <= d.jhi; ++j)
            if (!d.terms.count({i, j})) d.terms.emplace(std::pair{i, j}, zero_rep<F>(d.pres));

    for (int i = d.ilo; i <= d.ihi; ++i)
        for (int j = d.jlo; j <= d.jhi; ++j) {
            if (i < d.ihi) {
                auto h = d.horiz_or_zero(i, j);
                if (!is_valid_morphism(d.terms.at({i, j}), d.terms.at({i + 1, j}), h))
                    throw ShapeMismatch(fmt::format("h at ({},{}) is not a morphism", i, j));
                d.horiz[{i, j}] = h;
            }
            if (j < d.jhi) {
                auto v = d.vert_or_zero(i, j);
                if (!is_valid_morphism(d.terms.at({i, j}), d.terms.at({i, j + 1}), v))
                    throw ShapeMismatch(fmt::format("v at ({},{}) is not a morphism", i, j));
                d.vert[{i, j}] = v;
            }
        }
    for (int i = d.ilo; i <= d.ihi; ++i)
        for (int j = d.jlo; j <= d.jhi; ++j) {
            if (i + 2 <= d.ihi &&
                !mor_is_zero(compose(d.horiz.at({i + 1, j}), d.horiz.at({i, j}))))
                throw ShapeMismatch(fmt::format("row {} does not square to zero at i={}", j, i));
            if (j + 2 <= d.jhi && !mor_is_zero(compose(d.vert.at({i, j + 1}), d.vert.at({i, j}))))
                throw ShapeMismatch(fmt::format("column {} does not square to zero at j={}", i, j));
            if (i < d.ihi && j < d.jhi) {
                auto sq = mor_add(compose(d.vert.at({i + 1, j}), d.horiz.at({i, j})),
                                  compose(d.horiz.at({i, j + 1}), d.vert.at({i, j})));
                if (!mor_is_zero(sq))
                    throw ShapeMismatch(
                        fmt::format("square at ({},{}) does not anticommute", i, j));
            }
        }
}

template <class F>
DoubleComplex<F> make_dcomplex(typename Presentation<F>::Ptr pres, int ilo, int jlo,
                               std::map<std::pair<int, int>, Rep<F>> terms,
                               std::map<std::pair<int, int>, RepMor<F>> horiz,
                               std::map<std::pair<int, int>, RepMor<F>> vert,
                               int ihi, int jhi, bool tag_blocks = true) {
    DoubleComplex<F> d;
    d.pres = std::move(pres);
    d.ilo = ilo;
    d.ihi = ihi;
    d.jlo = jlo;
    d.jhi = jhi;
    d.terms = std::move(terms);
    d.horiz = std::move(horiz);
    d.vert = std::move(vert);
    validate_dcomplex(d);
    if (tag_blocks)
        for (int i = ilo; i <= ihi; ++i)
            for (int j = jlo; j <= jhi; ++j)
                d.blocks[{i, j}] = {Block{0, i, j, d.terms.at({i, j}).dims}};
    return d;
}

/* Column i as a complex (degree = j). */
template <class F>
Complex<F> column_of(const DoubleComplex<F>& d, int i) {
    std::vector<Rep<F>> terms;
    std::vector<RepMor<F>> diffs;
    for (int j = d.jlo; j <= d.jhi; ++j) {
        terms.push_back(d.term_or_zero(i, j));
        if (j < d.jhi) diffs.push_back(d.vert_or_zero(i, j));
    }
    return make_complex<F>(d.pres, d.jlo, std::move(terms), std::move(diffs), d.bottom_closed,
                           d.top_closed);
}

/* Row j as a complex (degree = i). */
template <class F>
Complex<F> row_of(const DoubleComplex<F>& d, int j) {
    std::vector<Rep<F>> terms;
    std::vector<RepMor<F>> diffs;
    for (int i = d.ilo; i <= d.ihi; ++i) {
        terms.push_back(d.term_or_zero(i, j));
        if (i < d.ihi) diffs.push_back(d.horiz_or_zero(i, j));
    }
    return make_complex<F>(d.pres, d.ilo, std::move(terms), std::move(diffs), d.left_closed,
                           d.right_closed);
}

/* Horizontal shift: M[1]^{i,j} = M^{i+1,j} with both differentials negated. */
template <class F>
DoubleComplex<F> hshift(const DoubleComplex<F>& d, int k) {
    DoubleComplex<F> s;
    s.pres = d.pres;
    s.ilo = d.ilo - k;
    s.ihi = d.ihi - k;
    s.jlo = d.jlo;
    s.jhi = d.jhi;
    s.left_closed = d.left_closed;
    s.right_closed = d.right_closed;
    s.bottom_closed = d.bottom_closed;
    s.top_closed = d.top_closed;
    const bool flip = (k % 2) != 0;
    for (const auto& [ij, t] : d.terms) s.terms.emplace(std::pair{ij.first - k, ij.second}, t);
    for (const auto& [ij, h] : d.horiz)
        s.horiz.emplace(std::pair{ij.first - k, ij.second}, flip ? mor_negate(h) : h);
    for (const auto& [ij, v] : d.vert)
        s.vert.emplace(std::pair{ij.first - k, ij.second}, flip ? mor_negate(v) : v);
    for (const auto& [ij, b] : d.blocks) s.blocks.emplace(std::pair{ij.first - k, ij.second}, b);
    return s;
}

/* Total complex: T^n = (+)_i M^{i,n-i}, d = v + h blockwise, signless.
 * Requires a fully bounded window so every diagonal is certainly finite. */
template <class F>
Complex<F> total_complex(const DoubleComplex<F>& d) {
    if (!d.all_closed())
        throw OpenDiagonal("total complex needs all four window sides closed");
    const F& fld = d.pres->field();
    Complex<F> t;
    t.pres = d.pres;
    t.lo = d.ilo + d.jlo;
    t.hi = d.ihi + d.jhi;

    // columns contributing to diagonal n, ascending
    auto cols = [&](int n) {
        std::vector<int> c;
        for (int i = d.ilo; i <= d.ihi; ++i)
            if (n - i >= d.jlo && n - i <= d.jhi) c.push_back(i);
        return c;
    };
    std::map<int, std::vector<int>> offs; // per diagonal: per column, offset per vertex packed
    for (int n = t.lo; n <= t.hi; ++n) {
        std::vector<Rep<F>> summands;
        std::vector<Block> bl;
        for (int i : cols(n)) {
            summands.push_back(d.term_or_zero(i, n - i));
            for (const auto& b : d.blocks_at(i, n - i)) bl.push_back(b);
        }
        t.terms.emplace(n, direct_sum<F>(d.pres, summands));
        if (!bl.empty()) t.blocks.emplace(n, std::move(bl));
    }
    const int nv = d.pres->quiver().num_vertices();
    for (int n = t.lo; n < t.hi; ++n) {
        const auto& src = t.terms.at(n);
        const auto& tgt = t.terms.at(n + 1);
        RepMor<F> dn;
        for (int x = 0; x < nv; ++x) dn.mats.push_back(Matrix<F>(fld, tgt.dims[x], src.dims[x]));
        auto csrc = cols(n);
        auto ctgt = cols(n + 1);
        for (int x = 0; x < nv; ++x) {
            // offsets of column blocks inside source/target diagonals
            std::map<int, int> so, to;
            {
                int off = 0;
                for (int c : csrc) { so[c] = off; off += d.term_or_zero(c, n - c).dims[x]; }
                off = 0;
                for (int c : ctgt) { to[c] = off; off += d.term_or_zero(c, n + 1 - c).dims[x]; }
            }
            for (int i : csrc) {
                const int j = n - i;
                if (j + 1 <= d.jhi && to.count(i))
                    dn.mats[x].set_block(to.at(i), so.at(i), d.vert_or_zero(i, j).mats[x]);
                if (i + 1 <= d.ihi && to.count(i + 1))
                    dn.mats[x].set_block(to.at(i + 1), so.at(i), d.horiz_or_zero(i, j).mats[x]);
            }
        }
        t.diffs.emplace(n, std::move(dn));
    }
    // construction-time d^2 = 0 sanity
    for (int n = t.lo; n + 1 < t.hi; ++n)
        if (!mor_is_zero(compose(t.diffs.at(n + 1), t.diffs.at(n))))
            throw ShapeMismatch(fmt::format("total differential fails d^2=0 at degree {}", n));
    return t;
}

/* ---- double-complex morphisms and cones ---------------------------------- */

template <class F>
struct DoubleMor {
    std::map<std::pair<int, int>, RepMor<F>> mats;
};

template <class F>
DoubleMor<F> make_double_morphism(const DoubleComplex<F>& m, const DoubleComplex<F>& n,
                                  std::map<std::pair<int, int>, RepMor<F>> mats) {
    if (m.ilo != n.ilo || m.ihi != n.ihi || m.jlo != n.jlo || m.jhi != n.jhi)
        throw ShapeMismatch("double morphism requires matching windows");
    DoubleMor<F> f;
    for (int i = m.ilo; i <= m.ihi; ++i)
        for (int j = m.jlo; j <= m.jhi; ++j) {
            auto it = mats.find({i, j});
            RepMor<F> fij = (it != mats.end())
                                ? it->second
                                : zero_morphism(m.terms.at({i, j}), n.terms.at({i, j}));
            if (!is_valid_morphism(m.terms.at({i, j}), n.terms.at({i, j}), fij))
                throw ShapeMismatch(fmt::format("component at ({},{}) is not a morphism", i, j));
            f.mats[{i, j}] = std::move(fij);
        }
    for (int i = m.ilo; i <= m.ihi; ++i)
        for (int j = m.jlo; j <= m.jhi; ++j) {
            if (i < m.ihi &&
                !mor_equal(compose(f.mats.at({i + 1, j}), m.horiz.at({i, j})),
                           compose(n.horiz.at({i, j}), f.mats.at({i, j}))))
                throw ShapeMismatch(fmt::format("morphism fails h-square at ({},{})", i, j));
            if (j < m.jhi &&
                !mor_equal(compose(f.mats.at({i, j + 1}), m.vert.at({i, j})),
                           compose(n.vert.at({i, j}), f.mats.at({i, j}))))
                throw ShapeMismatch(fmt::format("morphism fails v-square at ({},{})", i, j));
        }
    return f;
}

/* Total of a double morphism: diagonal direct sums of the components. */
template <class F>
ComplexMor<F> total_morphism(const DoubleComplex<F>& m, const DoubleComplex<F>& n,
                             const DoubleMor<F>& f, const Complex<F>& tm, const Complex<F>& tn) {
    const int nv = m.pres->quiver().num_vertices();
    const F& fld = m.pres->field();
    std::map<int, RepMor<F>> mats;
    for (int nn = tm.lo; nn <= tm.hi; ++nn) {
        RepMor<F> g;
        for (int x = 0; x < nv; ++x)
            g.mats.push_back(Matrix<F>(fld, tn.terms.at(nn).dims[x], tm.terms.at(nn).dims[x]));
        for (int x = 0; x < nv; ++x) {
            int soff = 0, toff = 0;
            for (int i = m.ilo; i <= m.ihi; ++i) {
                const int j = nn - i;
                if (j < m.jlo || j > m.jhi) continue;
                g.mats[x].set_block(toff, soff, f.mats.at({i, j}).mats[x]);
                soff += m.terms.at({i, j}).dims[x];
                toff += n.terms.at({i, j}).dims[x];
            }
        }
        mats.emplace(nn, std::move(g));
    }
    return make_complex_morphism(tm, tn, std::move(mats));
}

/* Horizontal cone: H^{i,j} = M^{i+1,j} (+) N^{i,j} with
 * v = diag(-v_M, v_N) and h = [[-h_M, 0], [f, h_N]]. */
template <class F>
DoubleComplex<F> horizontal_cone(const DoubleComplex<F>& m, const DoubleComplex<F>& n,
                                 const DoubleMor<F>& f) {
    if (m.ilo != n.ilo || m.ihi != n.ihi || m.jlo != n.jlo || m.jhi != n.jhi)
        throw ShapeMismatch("horizontal cone requires matching windows");
    const F& fld = m.pres->field();
    const int nv = m.pres->quiver().num_vertices();
    DoubleComplex<F> c;
    c.pres = m.pres;
    c.ilo = m.ilo - 1;
    c.ihi = m.ihi;
    c.jlo = m.jlo;
    c.jhi = m.jhi;
    c.left_closed = m.left_closed && n.left_closed;
    c.right_closed = m.right_closed && n.right_closed;
    c.bottom_closed = m.bottom_closed && n.bottom_closed;
    c.top_closed = m.top_closed && n.top_closed;

    for (int i = c.ilo; i <= c.ihi; ++i)
        for (int j = c.jlo; j <= c.jhi; ++j) {
            auto mt = m.term_or_zero(i + 1, j);
            auto nt = n.term_or_zero(i, j);
            c.terms.emplace(std::pair{i, j}, direct_sum<F>(m.pres, {mt, nt}));
            std::vector<Block> bl;
            if (i + 1 <= m.ihi)
                for (auto b : m.blocks_at(i + 1, j)) { b.tag = 0; bl.push_back(b); }
            if (i >= n.ilo)
                for (auto b : n.blocks_at(i, j)) { b.tag = 1; bl.push_back(b); }
            c.blocks[{i, j}] = std::move(bl);
        }
    for (int i = c.ilo; i <= c.ihi; ++i)
        for (int j = c.jlo; j <= c.jhi; ++j) {
            auto msrc = m.term_or_zero(i + 1, j);
            auto nsrc = n.term_or_zero(i, j);
            if (j < c.jhi) {
                auto vm = m.vert_or_zero(i + 1, j);
                auto vn = n.vert_or_zero(i, j);
                RepMor<F> v;
                for (int x = 0; x < nv; ++x) {
                    Matrix<F> mat(fld, c.terms.at({i, j + 1}).dims[x], c.terms.at({i, j}).dims[x]);
                    mat.set_block(0, 0, vm.mats[x].negate());
                    mat.set_block(m.term_or_zero(i + 1, j + 1).dims[x], msrc.dims[x], vn.mats[x]);
                    v.mats.push_back(std::move(mat));
                }
                c.vert[{i, j}] = std::move(v);
            }
            if (i < c.ihi) {
                auto hm = m.horiz_or_zero(i + 1, j);
                auto hn = n.horiz_or_zero(i, j);
                RepMor<F> h;
                for (int x = 0; x < nv; ++x) {
                    Matrix<F> mat(fld, c.terms.at({i + 1, j}).dims[x], c.terms.at({i, j}).dims[x]);
                    mat.set_block(0, 0, hm.mats[x].negate());
                    const int rowoff = m.term_or_zero(i + 2, j).dims[x];
                    if (i + 1 >= m.ilo && i + 1 <= m.ihi)
                        mat.set_block(rowoff, 0, f.mats.at({i + 1, j}).mats[x]);
                    mat.set_block(rowoff, msrc.dims[x], hn.mats[x]);
                    h.mats.push_back(std::move(mat));
                }
                c.horiz[{i, j}] = std::move(h);
            }
        }
    validate_dcomplex(c);
    return c;
}

/* Vertical cone: V^{i,j} = M^{i,j+1} (+) N^{i,j} with
 * h = diag(-h_M, h_N) and v = [[-v_M, 0], [f, v_N]]; column i is the
 * mapping cone of f restricted to column i. */
template <class F>
DoubleComplex<F> vertical_cone(const DoubleComplex<F>& m, const DoubleComplex<F>& n,
                               const DoubleMor<F>& f) {
    if (m.ilo != n.ilo || m.ihi != n.ihi || m.jlo != n.jlo || m.jhi != n.jhi)
        throw ShapeMismatch("vertical cone requires matching windows");
    const F& fld = m.pres->field();
    const int nv = m.pres->quiver().num_vertices();
    DoubleComplex<F> c;
    c.pres = m.pres;
    c.ilo = m.ilo;
    c.ihi = m.ihi;
    c.jlo = m.jlo - 1;
    c.jhi = m.jhi;
    c.left_closed = m.left_closed && n.left_closed;
    c.right_closed = m.right_closed && n.right_closed;
    c.bottom_closed = m.bottom_closed && n.bottom_closed;
    c.top_closed = m.top_closed && n.top_closed;

    for (int i = c.ilo; i <= c.ihi; ++i)
        for (int j = c.jlo; j <= c.jhi; ++j) {
            auto mt = m.term_or_zero(i, j + 1);
            auto nt = n.term_or_zero(i, j);
            c.terms.emplace(std::pair{i, j}, direct_sum<F>(m.pres, {mt, nt}));
            std::vector<Block> bl;
            if (j + 1 <= m.jhi)
                for (auto b : m.blocks_at(i, j + 1)) { b.tag = 0; bl.push_back(b); }
            if (j >= n.jlo)
                for (auto b : n.blocks_at(i, j)) { b.tag = 1; bl.push_back(b); }
            c.blocks[{i, j}] = std::move(bl);
        }
    for (int i = c.ilo; i <= c.ihi; ++i)
        for (int j = c.jlo; j <= c.jhi; ++j) {
            auto msrc = m.term_or_zero(i, j + 1);
            auto nsrc = n.term_or_zero(i, j);
            if (i < c.ihi) {
                auto hm = m.horiz_or_zero(i, j + 1);
                auto hn = n.horiz_or_zero(i, j);
                RepMor<F> h;
                for (int x = 0; x < nv; ++x) {
                    Matrix<F> mat(fld, c.terms.at({i + 1, j}).dims[x], c.terms.at({i, j}).dims[x]);
                    mat.set_block(0, 0, hm.mats[x].negate());
                    mat.set_block(m.term_or_zero(i + 1, j + 1).dims[x], msrc.dims[x], hn.mats[x]);
                    h.mats.push_back(std::move(mat));
                }
                c.horiz[{i, j}] = std::move(h);
            }
            if (j < c.jhi) {
                auto vm = m.vert_or_zero(i, j + 1);
                auto vn = n.vert_or_zero(i, j);
                RepMor<F> v;
                for (int x = 0; x < nv; ++x) {
                    Matrix<F> mat(fld, c.terms.at({i, j + 1}).dims[x], c.terms.at({i, j}).dims[x]);
                    mat.set_block(0, 0, vm.mats[x].negate());
                    const int rowoff = m.term_or_zero(i, j + 2).dims[x];
                    if (j + 1 >= m.jlo && j + 1 <= m.jhi)
                        mat.set_block(rowoff, 0, f.mats.at({i, j + 1}).mats[x]);
                    mat.set_block(rowoff, msrc.dims[x], vn.mats[x]);
                    v.mats.push_back(std::move(mat));
                }
                c.vert[{i, j}] = std::move(v);
            }
        }
    validate_dcomplex(c);
    return c;
}

/* ---- assembly lemma -------------------------------------------------------- */

struct AalDegreeReport {
    int n = 0;
    bool rows_hypothesis = false; // H^{n-j}(row j) = 0 for every row j
    bool cols_hypothesis = false; // H^{n-i}(column i) = 0 for every column i
    int total_cohomology_dim = 0;
    bool asserted() const { return rows_hypothesis || cols_hypothesis; }
    bool verified() const { return !asserted() || total_cohomology_dim == 0; }
};

struct AalReport {
    std::vector<AalDegreeReport> degrees;
    bool all_verified() const {
        for (const auto& d : degrees)
            if (!d.verified()) return false;
        return true;
    }
};

/* Per-diagonal assembly check: when every row (or column) is acyclic at the
 * degree the diagonal crosses it, the total complex must be acyclic there;
 * the verdict is recomputed, never assumed.  Bounded windows make every
 * diagonal finite, which is the boundedness hypothesis at window scale. */
template <class F>
AalReport check_aal(const DoubleComplex<F>& d) {
    if (!d.all_closed()) throw OpenDiagonal("assembly check needs a fully closed window");
    auto t = total_complex(d);
    std::vector<Complex<F>> rows, cols;
    for (int j = d.jlo; j <= d.jhi; ++j) rows.push_back(row_of(d, j));
    for (int i = d.ilo; i <= d.ihi; ++i) cols.push_back(column_of(d, i));
    AalReport rep;
    for (int n = t.lo; n <= t.hi; ++n) {
        AalDegreeReport r;
        r.n = n;
        r.rows_hypothesis = true;
        for (int j = d.jlo; j <= d.jhi; ++j)
            if (!cohomology_dims(rows[j - d.jlo], n - j).is_zero()) {
                r.rows_hypothesis = false;
                break;
            }
        r.cols_hypothesis = true;
        for (int i = d.ilo; i <= d.ihi; ++i)
            if (!cohomology_dims(cols[i - d.ilo], n - i).is_zero()) {
                r.cols_hypothesis = false;
                break;
            }
        r.total_cohomology_dim = cohomology_dims(t, n).total();
        rep.degrees.push_back(r);
    }
    return rep;
}

/* ---- functor extension ------------------------------------------------------ */

/*
 * Extending a functor "object -> complex, morphism -> chain map" to
 * complexes: column i of the double complex is the image of the i-th term
 * with its differential scaled by (-1)^i; horizontals are the images of the
 * input differentials.  The extension is the total complex of that grid.
 *
 * Fn must provide:
 *   Complex<F> on_object(const Rep<F>&) const;
 *   ComplexMor<F> on_morphism(const Rep<F>& src, const Rep<F>& tgt,
 *                             const RepMor<F>&, const Complex<F>& img_src,
 *                             const Complex<F>& img_tgt) const;
 * with every on_object output sharing closed window bounds.
 */
template <class F, class Fn>
DoubleComplex<F> extend_functor_grid(const Fn& fn, const Complex<F>& c) {
    if (!c.lo_closed || !c.hi_closed)
        throw OpenDiagonal("functor extension needs a closed input window");
    std::map<int, Complex<F>> images;
    int jlo = 0, jhi = -1;
    bool first = true;
    for (int i = c.lo; i <= c.hi; ++i) {
        auto img = fn.on_object(c.terms.at(i));
        if (!img.lo_closed || !img.hi_closed)
            throw OpenDiagonal("functor image must have a closed window");
        if (first) { jlo = img.lo; jhi = img.hi; first = false; }
        jlo = std::min(jlo, img.lo);
        jhi = std::max(jhi, img.hi);
        images.emplace(i, std::move(img));
    }
    if (first) { jlo = 0; jhi = 0; }
    for (auto& [i, img] : images) img = pad_window(img, jlo, jhi);

    typename Presentation<F>::Ptr out_pres =
        images.empty() ? c.pres : images.begin()->second.pres;
    std::map<std::pair<int, int>, Rep<F>> terms;
    std::map<std::pair<int, int>, RepMor<F>> horiz, vert;
    for (int i = c.lo; i <= c.hi; ++i) {
        const auto& img = images.at(i);
        const bool odd = ((i % 2) + 2) % 2 == 1;
        for (int j = jlo; j <= jhi; ++j) {
            terms[{i, j}] = img.terms.at(j);
            if (j < jhi) {
                auto v = img.diffs.at(j);
                vert[{i, j}] = odd ? mor_negate(v) : v; // column twist by (-1)^i
            }
        }
        if (i < c.hi) {
            auto chain = fn.on_morphism(c.terms.at(i), c.terms.at(i + 1), c.diffs.at(i),
                                        images.at(i), images.at(i + 1));
            for (int j = jlo; j <= jhi; ++j) horiz[{i, j}] = chain.mats.at(j);
        }
    }
    return make_dcomplex<F>(out_pres, c.lo, jlo, std::move(terms), std::move(horiz),
                            std::move(vert), c.hi, jhi);
}

template <class F, class Fn>
Complex<F> extend_functor(const Fn& fn, const Complex<F>& c) {
    return total_complex(extend_functor_grid(fn, c));
}

/*
 * Extending a pointwise morphism: given per-term chain maps
 * eta_i: Fgrid column i -> Ggrid column i (untwisted), the grid morphism has
 * (i,j) component eta_i^j.  Naturality across the input differentials is
 * what make_double_morphism verifies; a failing square raises NotNatural.
 */
template <class F>
ComplexMor<F> extend_morphism(const DoubleComplex<F>& fgrid, const DoubleComplex<F>& ggrid,
                              const std::map<int, ComplexMor<F>>& eta, const Complex<F>& ftot,
                              const Complex<F>& gtot) {
    std::map<std::pair<int, int>, RepMor<F>> mats;
    for (int i = fgrid.ilo; i <= fgrid.ihi; ++i) {
        auto it = eta.find(i);
        if (it == eta.end()) throw ShapeMismatch(fmt::format("missing component at column {}", i));
        for (int j = fgrid.jlo; j <= fgrid.jhi; ++j) mats[{i, j}] = it->second.mats.at(j);
    }
    DoubleMor<F> dm;
    try {
        dm = make_double_morphism(fgrid, ggrid, std::move(mats));
    } catch (const ShapeMismatch& e) {
        throw NotNatural(e.what());
    }
    return total_morphism(fgrid, ggrid, dm, ftot, gtot);
}

/* ---- shape classification --------------------------------------------------- */

enum class Shape { down, up, both, neither };

struct ShapeReport {
    Shape verdict = Shape::both;
    // extrema of i + p*j and i - q*j over the support
    double max_ipj = 0, min_ipj = 0, max_iqj = 0, min_iqj = 0;
    bool empty = true;
};

/* Support points are (homological degree i, vertex level j).  The verdict
 * is anchored at the origin: "down" when i+pj <= 0 and i-qj <= 0 on all
 * support, "up" for the mirrored inequalities, "both"/"neither" otherwise. */
template <class F>
ShapeReport shape_classify(const Complex<F>& c, const Grading& g, double p, double q) {
    ShapeReport r;
    bool down = true, up = true;
    for (int n = c.lo; n <= c.hi; ++n) {
        const auto& t = c.terms.at(n);
        for (size_t x = 0; x < t.dims.size(); ++x) {
            if (t.dims[x] == 0) continue;
            const double i = n, j = static_cast<double>(g.level[x]);
            const double ipj = i + p * j, iqj = i - q * j;
            if (r.empty) {
                r.max_ipj = r.min_ipj = ipj;
                r.max_iqj = r.min_iqj = iqj;
                r.empty = false;
            } else {
                r.max_ipj = std::max(r.max_ipj, ipj);
                r.min_ipj = std::min(r.min_ipj, ipj);
                r.max_iqj = std::max(r.max_iqj, iqj);
                r.min_iqj = std::min(r.min_iqj, iqj);
            }
            if (ipj > 0 || iqj > 0) down = false;
            if (ipj < 0 || iqj < 0) up = false;
        }
    }
    r.verdict = down && up ? Shape::both : down ? Shape::down : up ? Shape::up : Shape::neither;
    return r;
}

} // namespace qk
