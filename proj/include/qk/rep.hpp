#pragma once

#include <numeric>
#include <vector>

#include "qk/presentation.hpp"

/*
 * Finite-dimensional representations of a bound quiver (Q,R): one space per
 * vertex, one matrix per arrow, with every degree-2 relation acting as zero.
 * Morphisms are per-vertex matrices commuting with the arrow actions.
 *
 * Projectives and injectives carry a radical grading as metadata (the path
 * length of each basis vector); kernels and cokernels are computed
 * vertexwise with deterministic RREF bases.
 */
namespace qk {

template <class F>
struct Rep {
    typename Presentation<F>::Ptr pres;
    std::vector<int> dims;                     // per vertex
    std::vector<Matrix<F>> act;                // per arrow: dims[tgt] x dims[src]
    std::vector<std::vector<long long>> rdeg;  // optional radical degree per basis vector

    int dim(int x) const { return dims[x]; }
    int total_dim() const { return std::accumulate(dims.begin(), dims.end(), 0); }
    bool is_zero_rep() const { return total_dim() == 0; }
    bool has_rdeg() const { return !rdeg.empty(); }
};

template <class F>
struct RepMor {
    std::vector<Matrix<F>> mats; // per vertex: N.dims[x] x M.dims[x]
};

/* ---- construction & validation ---------------------------------------- */

template <class F>
Rep<F> zero_rep(typename Presentation<F>::Ptr p) {
    Rep<F> m;
    m.pres = std::move(p);
    m.dims.assign(m.pres->quiver().num_vertices(), 0);
    for (int a = 0; a < m.pres->quiver().num_arrows(); ++a)
        m.act.push_back(Matrix<F>(m.pres->field(), 0, 0));
    return m;
}

/* M(rho) for a path rho: the arrow actions composed in traversal order. */
template <class F>
Matrix<F> apply_path(const Rep<F>& m, const Path& p) {
    Matrix<F> mat = Matrix<F>::identity(m.pres->field(), m.dims[p.src]);
    for (int a : p.arrows) mat = m.act[a] * mat;
    return mat;
}

/* Every generator of every R_2(x,y) must act as zero. */
template <class F>
bool check_relations(const Rep<F>& m) {
    const auto& p = *m.pres;
    const F& f = p.field();
    for (const auto& [key, sub] : p.r2_map()) {
        const auto [x, y] = key;
        const auto& ps = p.paths_between(x, y, 2);
        for (int r = 0; r < sub.dim(); ++r) {
            Matrix<F> acc(f, m.dims[y], m.dims[x]);
            for (int t = 0; t < static_cast<int>(ps.size()); ++t)
                if (!f.is_zero(sub.basis()(r, t)))
                    acc = acc + apply_path(m, ps[t]).scale(sub.basis()(r, t));
            if (!acc.is_zero()) return false;
        }
    }
    return true;
}

template <class F>
Rep<F> make_rep(typename Presentation<F>::Ptr p, std::vector<int> dims,
                std::vector<Matrix<F>> act, std::vector<std::vector<long long>> rdeg = {}) {
    Rep<F> m{std::move(p), std::move(dims), std::move(act), std::move(rdeg)};
    const auto& q = m.pres->quiver();
    if (static_cast<int>(m.dims.size()) != q.num_vertices() ||
        static_cast<int>(m.act.size()) != q.num_arrows())
        throw DimensionMismatch("representation data does not match the quiver");
    for (int a = 0; a < q.num_arrows(); ++a)
        if (m.act[a].rows() != m.dims[q.arrow(a).tgt] || m.act[a].cols() != m.dims[q.arrow(a).src])
            throw DimensionMismatch(fmt::format("arrow '{}' action has shape {} but needs {}x{}",
                                                q.arrow(a).name, m.act[a].shape(),
                                                m.dims[q.arrow(a).tgt], m.dims[q.arrow(a).src]));
    if (!check_relations(m))
        throw DimensionMismatch("arrow actions do not satisfy the relations");
    return m;
}

template <class F>
bool is_valid_morphism(const Rep<F>& m, const Rep<F>& n, const RepMor<F>& f) {
    const auto& q = m.pres->quiver();
    if (static_cast<int>(f.mats.size()) != q.num_vertices()) return false;
    for (int x = 0; x < q.num_vertices(); ++x)
        if (f.mats[x].rows() != n.dims[x] || f.mats[x].cols() != m.dims[x]) return false;
    for (int a = 0; a < q.num_arrows(); ++a) {
        const auto& ar = q.arrow(a);
        if (!(f.mats[ar.tgt] * m.act[a] == n.act[a] * f.mats[ar.src])) return false;
    }
    return true;
}

template <class F>
RepMor<F> zero_morphism(const Rep<F>& m, const Rep<F>& n) {
    RepMor<F> f;
    for (size_t x = 0; x < m.dims.size(); ++x)
        f.mats.push_back(Matrix<F>(m.pres->field(), n.dims[x], m.dims[x]));
    return f;
}

template <class F>
RepMor<F> identity_morphism(const Rep<F>& m) {
    RepMor<F> f;
    for (int d : m.dims) f.mats.push_back(Matrix<F>::identity(m.pres->field(), d));
    return f;
}

template <class F>
RepMor<F> compose(const RepMor<F>& g, const RepMor<F>& f) { // g after f
    RepMor<F> h;
    for (size_t x = 0; x < f.mats.size(); ++x) h.mats.push_back(g.mats[x] * f.mats[x]);
    return h;
}

template <class F>
RepMor<F> mor_add(const RepMor<F>& f, const RepMor<F>& g) {
    RepMor<F> h;
    for (size_t x = 0; x < f.mats.size(); ++x) h.mats.push_back(f.mats[x] + g.mats[x]);
    return h;
}

template <class F>
RepMor<F> mor_negate(const RepMor<F>& f) {
    RepMor<F> h;
    for (const auto& m : f.mats) h.mats.push_back(m.negate());
    return h;
}

template <class F>
bool mor_is_zero(const RepMor<F>& f) {
    for (const auto& m : f.mats)
        if (!m.is_zero()) return false;
    return true;
}

template <class F>
bool mor_equal(const RepMor<F>& f, const RepMor<F>& g) {
    return f.mats == g.mats;
}

/* ---- standard modules -------------------------------------------------- */

template <class F>
Rep<F> simple(typename Presentation<F>::Ptr p, int a) {
    Rep<F> s = zero_rep<F>(p);
    s.dims[a] = 1;
    const auto& q = s.pres->quiver();
    for (int i = 0; i < q.num_arrows(); ++i)
        s.act[i] = Matrix<F>(s.pres->field(), s.dims[q.arrow(i).tgt], s.dims[q.arrow(i).src]);
    s.rdeg.assign(q.num_vertices(), {});
    s.rdeg[a] = {0};
    return s;
}

/* P_a = Lambda e_a: the space at x collects the graded components
 * e_x Lambda_n e_a over all n, with arrows acting by left multiplication in
 * coset coordinates.  Degree layers are enumerated until one vanishes
 * entirely (legitimate for graded algebras); the path cap guards the
 * infinite-dimensional case. */
template <class F>
Rep<F> projective(typename Presentation<F>::Ptr p, int a) {
    const auto& q = p->quiver();
    const F& f = p->field();
    const int nv = q.num_vertices();

    // basis[x] = list of (degree, coset index); offset[x][n] = first index of layer n
    std::vector<std::vector<std::pair<int, int>>> basis(nv);
    std::vector<std::map<int, int>> offset(nv);
    long long total = 0;
    for (int n = 0;; ++n) {
        long long layer = 0;
        for (int x = 0; x < nv; ++x) {
            const auto& c = p->component(a, x, n);
            if (c.quotient_dim == 0) continue;
            offset[x][n] = static_cast<int>(basis[x].size());
            for (int t = 0; t < c.quotient_dim; ++t) basis[x].push_back({n, t});
            layer += c.quotient_dim;
        }
        total += layer;
        if (layer == 0) break;
        if (total > p->path_cap())
            throw PathExplosion(fmt::format("projective at '{}' exceeds the cap of {} basis paths",
                                            q.vertex_name(a), p->path_cap()));
    }

    Rep<F> m;
    m.pres = p;
    m.dims.resize(nv);
    m.rdeg.resize(nv);
    for (int x = 0; x < nv; ++x) {
        m.dims[x] = static_cast<int>(basis[x].size());
        for (auto& [n, t] : basis[x]) m.rdeg[x].push_back(n);
    }
    for (int i = 0; i < q.num_arrows(); ++i) {
        const auto& ar = q.arrow(i);
        Matrix<F> mat(f, m.dims[ar.tgt], m.dims[ar.src]);
        const auto alpha = p->arrow_element(i);
        for (int col = 0; col < m.dims[ar.src]; ++col) {
            const auto [n, t] = basis[ar.src][col];
            const auto& comp = p->component(a, ar.src, n);
            AlgebraElement<F> u{a, ar.src, n,
                                std::vector<typename F::elem>(comp.quotient_dim, f.zero())};
            u.coords[t] = f.one();
            auto au = p->multiply(alpha, u); // alpha acting last: a -> tgt, degree n+1
            auto it = offset[ar.tgt].find(n + 1);
            if (it == offset[ar.tgt].end()) continue; // layer empty, product must be zero
            for (int s = 0; s < static_cast<int>(au.coords.size()); ++s)
                mat(it->second + s, col) = au.coords[s];
        }
        m.act.push_back(std::move(mat));
    }
    return m;
}

/* Basis offset of the degree-n layer of P_a at vertex x. */
template <class F>
int projective_layer_offset(const Presentation<F>& p, int a, int x, int n) {
    int off = 0;
    for (int k = 0; k < n; ++k) off += p.component(a, x, k).quotient_dim;
    return off;
}

/* Hom(P_b, P_a) from an algebra element u in e_b Lambda e_a (a path class
 * a -> b): right multiplication v |-> v u, acting P_b -> P_a. */
template <class F>
RepMor<F> projective_hom(typename Presentation<F>::Ptr p, const Rep<F>& pb, const Rep<F>& pa,
                         const AlgebraElement<F>& u) {
    const auto& q = p->quiver();
    const F& f = p->field();
    const int a = u.src, b = u.tgt;
    RepMor<F> mor;
    for (int x = 0; x < q.num_vertices(); ++x) {
        Matrix<F> mat(f, pa.dims[x], pb.dims[x]);
        int col = 0;
        for (int m = 0; col < pb.dims[x]; ++m) {
            const auto& comp = p->component(b, x, m);
            for (int t = 0; t < comp.quotient_dim; ++t, ++col) {
                AlgebraElement<F> v{b, x, m,
                                    std::vector<typename F::elem>(comp.quotient_dim, f.zero())};
                v.coords[t] = f.one();
                auto vu = p->multiply(v, u); // in e_x Lambda_{m+n} e_a
                const int off = projective_layer_offset(*p, a, x, m + u.n);
                for (int s = 0; s < static_cast<int>(vu.coords.size()); ++s)
                    mat(off + s, col) = vu.coords[s];
            }
        }
        mor.mats.push_back(std::move(mat));
    }
    return mor;
}

/* D: Mod Lambda -> Mod Lambda^o; spaces dualize, arrow actions transpose. */
template <class F>
Rep<F> dualize(const Rep<F>& m) {
    Rep<F> d;
    d.pres = m.pres->opposite();
    d.dims = m.dims;
    for (const auto& mat : m.act) d.act.push_back(mat.transpose());
    d.rdeg = m.rdeg;
    return d;
}

template <class F>
Rep<F> injective(typename Presentation<F>::Ptr p, int a) {
    return dualize(projective<F>(p->opposite(), a));
}

template <class F>
RepMor<F> dualize_morphism(const RepMor<F>& f) {
    RepMor<F> d;
    for (const auto& m : f.mats) d.mats.push_back(m.transpose());
    return d;
}

/* ---- direct sums -------------------------------------------------------- */

template <class F>
Rep<F> direct_sum(typename Presentation<F>::Ptr p, const std::vector<Rep<F>>& summands) {
    const auto& q = p->quiver();
    const F& f = p->field();
    Rep<F> m;
    m.pres = p;
    m.dims.assign(q.num_vertices(), 0);
    bool all_rdeg = true;
    for (const auto& s : summands) {
        for (int x = 0; x < q.num_vertices(); ++x) m.dims[x] += s.dims[x];
        all_rdeg = all_rdeg && s.has_rdeg();
    }
    for (int a = 0; a < q.num_arrows(); ++a) {
        const auto& ar = q.arrow(a);
        Matrix<F> mat(f, m.dims[ar.tgt], m.dims[ar.src]);
        int ro = 0, co = 0;
        for (const auto& s : summands) {
            mat.set_block(ro, co, s.act[a]);
            ro += s.dims[ar.tgt];
            co += s.dims[ar.src];
        }
        m.act.push_back(std::move(mat));
    }
    if (all_rdeg && !summands.empty()) {
        m.rdeg.resize(q.num_vertices());
        for (int x = 0; x < q.num_vertices(); ++x)
            for (const auto& s : summands)
                m.rdeg[x].insert(m.rdeg[x].end(), s.rdeg[x].begin(), s.rdeg[x].end());
    }
    return m;
}

/* offset of summand s at vertex x inside the direct sum */
template <class F>
int block_offset(const std::vector<Rep<F>>& summands, size_t s, int x) {
    int off = 0;
    for (size_t i = 0; i < s; ++i) off += summands[i].dims[x];
    return off;
}

/* ---- top, socle, covers ------------------------------------------------ */

template <class F>
struct TopInfo {
    std::vector<int> dims;            // per vertex
    std::vector<Matrix<F>> proj;      // projection M(x) -> top(x)
    std::vector<std::vector<int>> gen_cols; // chosen basis lifts (standard coords)
};

/* T(M) = M/JM: quotient by the images of all incoming arrows. */
template <class F>
TopInfo<F> j_top(const Rep<F>& m) {
    const auto& q = m.pres->quiver();
    const F& f = m.pres->field();
    TopInfo<F> top;
    for (int x = 0; x < q.num_vertices(); ++x) {
        Matrix<F> in(f, 0, m.dims[x]);
        for (int a = 0; a < q.num_arrows(); ++a)
            if (q.arrow(a).tgt == x && m.act[a].rows() > 0)
                in = vstack(in, m.act[a].transpose());
        auto u = Subspace<F>::from_rows(in);
        auto piv = u.pivots();
        std::vector<int> rest;
        {
            size_t pi = 0;
            for (int c = 0; c < m.dims[x]; ++c) {
                if (pi < piv.size() && piv[pi] == c) { ++pi; continue; }
                rest.push_back(c);
            }
        }
        const int t = static_cast<int>(rest.size());
        Matrix<F> pr(f, t, m.dims[x]);
        for (int c = 0; c < m.dims[x]; ++c) {
            // reduce e_c modulo the image, read coset coordinates
            std::vector<typename F::elem> v(m.dims[x], f.zero());
            v[c] = f.one();
            for (int r = 0; r < u.dim(); ++r) {
                const auto s = v[piv[r]];
                if (f.is_zero(s)) continue;
                for (int j = 0; j < m.dims[x]; ++j)
                    v[j] = f.sub(v[j], f.mul(s, u.basis()(r, j)));
            }
            for (int i = 0; i < t; ++i) pr(i, c) = v[rest[i]];
        }
        top.dims.push_back(t);
        top.proj.push_back(std::move(pr));
        top.gen_cols.push_back(std::move(rest));
    }
    return top;
}

template <class F>
struct SocleInfo {
    std::vector<int> dims;
    std::vector<Matrix<F>> incl; // inclusion socle(x) -> M(x), columns a basis
};

/* S(M) = {m : Jm = 0}: joint kernel of all outgoing arrows. */
template <class F>
SocleInfo<F> j_socle(const Rep<F>& m) {
    const auto& q = m.pres->quiver();
    const F& f = m.pres->field();
    SocleInfo<F> soc;
    for (int x = 0; x < q.num_vertices(); ++x) {
        Matrix<F> out(f, 0, m.dims[x]);
        for (int a = 0; a < q.num_arrows(); ++a)
            if (q.arrow(a).src == x) out = vstack(out, m.act[a]);
        auto k = kernel(out);
        soc.dims.push_back(k.dim());
        soc.incl.push_back(k.basis().transpose());
    }
    return soc;
}

template <class F>
struct Cover {
    Rep<F> proj;                 // direct sum of P_a
    RepMor<F> map;               // surjection onto the module
    std::vector<int> multiplicity; // per vertex a
};

/* Projective J-cover: one P_a per normalized top basis vector, mapped by
 * evaluating paths on the chosen generator lifts. */
template <class F>
Cover<F> projective_cover(const Rep<F>& m) {
    if (m.is_zero_rep()) throw ZeroModule("projective cover of the zero module");
    const auto& q = m.pres->quiver();
    const F& f = m.pres->field();
    auto top = j_top(m);

    Cover<F> cov;
    cov.multiplicity = top.dims;
    std::vector<Rep<F>> summands;
    std::vector<std::pair<int, int>> gens; // (vertex a, generator column in M(a))
    for (int a = 0; a < q.num_vertices(); ++a)
        for (int t = 0; t < top.dims[a]; ++t) {
            summands.push_back(projective<F>(m.pres, a));
            gens.push_back({a, top.gen_cols[a][t]});
        }
    cov.proj = direct_sum<F>(m.pres, summands);

    RepMor<F> d;
    for (int x = 0; x < q.num_vertices(); ++x)
        d.mats.push_back(Matrix<F>(f, m.dims[x], cov.proj.dims[x]));
    for (size_t s = 0; s < summands.size(); ++s) {
        const auto [a, gcol] = gens[s];
        // basis of the summand at x: coset representatives by degree
        for (int x = 0; x < q.num_vertices(); ++x) {
            int local = 0;
            for (int n = 0; local < summands[s].dims[x]; ++n) {
                const auto& c = m.pres->component(a, x, n);
                for (int t = 0; t < c.quotient_dim; ++t, ++local) {
                    const auto v = apply_path(m, c.coset_reps[t]).col(gcol);
                    const int col = block_offset(summands, s, x) + local;
                    for (int i = 0; i < m.dims[x]; ++i) d.mats[x](i, col) = v[i];
                }
            }
        }
    }
    cov.map = std::move(d);

    // surjectivity and minimality (kernel inside the radical, i.e. kernel
    // coordinates vanish on the degree-0 generator columns)
    for (int x = 0; x < q.num_vertices(); ++x) {
        if (rank(cov.map.mats[x]) != m.dims[x])
            throw DimensionMismatch("projective cover map is not surjective");
        auto ker = kernel_rows(cov.map.mats[x]);
        for (int r = 0; r < ker.rows(); ++r)
            for (int c = 0; c < cov.proj.dims[x]; ++c)
                if (cov.proj.rdeg[x][c] == 0 && !f.is_zero(ker(r, c)))
                    throw DimensionMismatch("projective cover kernel meets the top");
    }
    return cov;
}

/* ---- kernels and cokernels --------------------------------------------- */

template <class F>
struct SubInfo {
    Rep<F> rep;
    RepMor<F> incl;
};

/* Vertexwise kernel with the induced arrow actions. */
template <class F>
SubInfo<F> kernel_rep(const Rep<F>& m, [[maybe_unused]] const Rep<F>& n, const RepMor<F>& f) {
    const auto& q = m.pres->quiver();
    SubInfo<F> out;
    out.rep.pres = m.pres;
    std::vector<Matrix<F>> kbasis; // rows
    for (int x = 0; x < q.num_vertices(); ++x) {
        auto k = kernel(f.mats[x]);
        out.rep.dims.push_back(k.dim());
        out.incl.mats.push_back(k.basis().transpose());
        kbasis.push_back(k.basis());
    }
    for (int a = 0; a < q.num_arrows(); ++a) {
        const auto& ar = q.arrow(a);
        // solve incl(tgt) * K(alpha) = M(alpha) * incl(src)
        auto rhs = m.act[a] * out.incl.mats[ar.src];
        auto sol = solve_matrix(out.incl.mats[ar.tgt], rhs);
        if (!sol)
            throw DimensionMismatch("kernel is not arrow-stable; morphism invalid?");
        out.rep.act.push_back(std::move(*sol));
    }
    return out;
}

template <class F>
struct QuotInfo {
    Rep<F> rep;
    RepMor<F> proj;
};

/* Vertexwise cokernel with the induced arrow actions. */
template <class F>
QuotInfo<F> cokernel_rep([[maybe_unused]] const Rep<F>& m, const Rep<F>& n, const RepMor<F>& f) {
    const auto& q = n.pres->quiver();
    const F& fld = n.pres->field();
    QuotInfo<F> out;
    out.rep.pres = n.pres;
    std::vector<Matrix<F>> sect; // representative choice coker(x) -> N(x)
    for (int x = 0; x < q.num_vertices(); ++x) {
        auto u = Subspace<F>::from_rows(f.mats[x].transpose());
        auto piv = u.pivots();
        std::vector<int> rest;
        size_t pi = 0;
        for (int c = 0; c < n.dims[x]; ++c) {
            if (pi < piv.size() && piv[pi] == c) { ++pi; continue; }
            rest.push_back(c);
        }
        const int t = static_cast<int>(rest.size());
        Matrix<F> pr(fld, t, n.dims[x]);
        for (int c = 0; c < n.dims[x]; ++c) {
            std::vector<typename F::elem> v(n.dims[x], fld.zero());
            v[c] = fld.one();
            for (int r = 0; r < u.dim(); ++r) {
                const auto s = v[piv[r]];
                if (fld.is_zero(s)) continue;
                for (int j = 0; j < n.dims[x]; ++j)
                    v[j] = fld.sub(v[j], fld.mul(s, u.basis()(r, j)));
            }
            for (int i = 0; i < t; ++i) pr(i, c) = v[rest[i]];
        }
        Matrix<F> sec(fld, n.dims[x], t);
        for (int i = 0; i < t; ++i) sec(rest[i], i) = fld.one();
        out.rep.dims.push_back(t);
        out.proj.mats.push_back(std::move(pr));
        sect.push_back(std::move(sec));
    }
    for (int a = 0; a < q.num_arrows(); ++a) {
        const auto& ar = q.arrow(a);
        out.rep.act.push_back(out.proj.mats[ar.tgt] * n.act[a] * sect[ar.src]);
    }
    return out;
}

/* ---- hom spaces --------------------------------------------------------- */

template <class F>
struct HomSpace {
    int dim;
    std::vector<RepMor<F>> basis;
};

/* Solve the commuting-square system f(y) M(alpha) = N(alpha) f(x). */
template <class F>
HomSpace<F> hom_space(const Rep<F>& m, const Rep<F>& n) {
    const auto& q = m.pres->quiver();
    const F& fld = m.pres->field();
    std::vector<int> off(q.num_vertices() + 1, 0);
    for (int x = 0; x < q.num_vertices(); ++x)
        off[x + 1] = off[x] + n.dims[x] * m.dims[x];
    const int unknowns = off.back();

    int eqs = 0;
    for (int a = 0; a < q.num_arrows(); ++a) {
        const auto& ar = q.arrow(a);
        eqs += n.dims[ar.tgt] * m.dims[ar.src];
    }
    Matrix<F> sys(fld, eqs, unknowns);
    int row = 0;
    for (int a = 0; a < q.num_arrows(); ++a) {
        const auto& ar = q.arrow(a);
        const int x = ar.src, y = ar.tgt;
        for (int i = 0; i < n.dims[y]; ++i)
            for (int c = 0; c < m.dims[x]; ++c, ++row) {
                for (int k = 0; k < m.dims[y]; ++k)
                    sys(row, off[y] + i * m.dims[y] + k) =
                        fld.add(sys(row, off[y] + i * m.dims[y] + k), m.act[a](k, c));
                for (int k = 0; k < n.dims[x]; ++k)
                    sys(row, off[x] + k * m.dims[x] + c) =
                        fld.sub(sys(row, off[x] + k * m.dims[x] + c), n.act[a](i, k));
            }
    }
    auto kb = kernel_rows(sys);
    HomSpace<F> h;
    h.dim = kb.rows();
    for (int r = 0; r < kb.rows(); ++r) {
        RepMor<F> f;
        for (int x = 0; x < q.num_vertices(); ++x) {
            Matrix<F> mat(fld, n.dims[x], m.dims[x]);
            for (int i = 0; i < n.dims[x]; ++i)
                for (int c = 0; c < m.dims[x]; ++c) mat(i, c) = kb(r, off[x] + i * m.dims[x] + c);
            f.mats.push_back(std::move(mat));
        }
        h.basis.push_back(std::move(f));
    }
    return h;
}

} // namespace qk
