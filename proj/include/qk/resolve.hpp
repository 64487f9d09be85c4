#pragma once

#include "qk/complex.hpp"

/*
 * Minimal projective resolutions by iterated covers, radical-degree
 * linearity checks, and injective coresolutions via vector-space duality.
 */
namespace qk {

template <class F>
struct Resolution {
    Complex<F> cx;            // window [-depth, 0]
    RepMor<F> augmentation;   // degree-0 term -> the resolved module
    std::map<int, std::vector<int>> multiplicity; // degree -> per-vertex cover counts
    bool completed = false;   // true when the next kernel vanished
};

/* Iterate projective_cover on successive vertexwise kernels.  Stops early
 * when a kernel is zero; otherwise the lower end of the window is open. */
template <class F>
Resolution<F> minimal_projective_resolution(const Rep<F>& m, int depth) {
    if (depth < 0) throw ShapeMismatch("resolution depth must be nonnegative");
    Resolution<F> res;
    std::vector<Rep<F>> terms;   // degree 0, -1, -2, ...
    std::vector<RepMor<F>> diffs; // d^{-1}, d^{-2}, ... (into the previous term)

    auto cover = projective_cover(m);
    res.augmentation = cover.map;
    res.multiplicity[0] = cover.multiplicity;
    terms.push_back(cover.proj);

    auto ker = kernel_rep(cover.proj, m, cover.map);
    bool done = ker.rep.is_zero_rep();
    for (int step = 1; step <= depth && !done; ++step) {
        auto c = projective_cover(ker.rep);
        res.multiplicity[-step] = c.multiplicity;
        diffs.push_back(compose(ker.incl, c.map)); // P^{-step} -> P^{-step+1}
        terms.push_back(c.proj);
        ker = kernel_rep(c.proj, ker.rep, c.map);
        done = ker.rep.is_zero_rep();
    }
    res.completed = done;

    std::reverse(terms.begin(), terms.end());
    std::reverse(diffs.begin(), diffs.end());
    const int lo = -static_cast<int>(terms.size()) + 1;
    res.cx = make_complex<F>(m.pres, lo, std::move(terms), std::move(diffs),
                             /*lo_closed=*/done, /*hi_closed=*/true);
    return res;
}

/* Every differential must be homogeneous of radical degree one: a nonzero
 * entry may only connect a degree-g basis vector to a degree-(g+1) one. */
template <class F>
bool is_linear_resolution(const Complex<F>& c) {
    for (int n = c.lo; n <= c.hi; ++n) {
        const auto& t = c.terms.at(n);
        if (!t.is_zero_rep() && !t.has_rdeg())
            throw NotProjectiveComponents(
                fmt::format("term at degree {} carries no radical grading", n));
    }
    const F& fld = c.pres->field();
    for (int n = c.lo; n < c.hi; ++n) {
        const auto& src = c.terms.at(n);
        const auto& tgt = c.terms.at(n + 1);
        const auto& d = c.diffs.at(n);
        for (size_t x = 0; x < src.dims.size(); ++x)
            for (int r = 0; r < d.mats[x].rows(); ++r)
                for (int col = 0; col < d.mats[x].cols(); ++col)
                    if (!fld.is_zero(d.mats[x](r, col)) &&
                        tgt.rdeg[x][r] != src.rdeg[x][col] + 1)
                        return false;
    }
    return true;
}

template <class F>
struct Coresolution {
    Complex<F> cx;            // window [0, depth]
    RepMor<F> augmentation;   // the module -> degree-0 term
    std::map<int, std::vector<int>> multiplicity;
    bool completed = false;
};

/* Dualize, resolve over the opposite algebra, dualize back. */
template <class F>
Coresolution<F> injective_coresolution(const Rep<F>& m, int depth) {
    auto dual = dualize(m);
    auto res = minimal_projective_resolution(dual, depth);
    Coresolution<F> cores;
    cores.completed = res.completed;
    for (const auto& [n, mult] : res.multiplicity) cores.multiplicity[-n] = mult;

    std::vector<Rep<F>> terms;
    std::vector<RepMor<F>> diffs;
    for (int n = 0; n >= res.cx.lo; --n) terms.push_back(dualize(res.cx.terms.at(n)));
    for (int n = -1; n >= res.cx.lo; --n) diffs.push_back(dualize_morphism(res.cx.diffs.at(n)));
    cores.cx = make_complex<F>(m.pres, 0, std::move(terms), std::move(diffs),
                               /*lo_closed=*/true, /*hi_closed=*/res.completed);
    cores.augmentation = dualize_morphism(res.augmentation);
    return cores;
}

} // namespace qk
