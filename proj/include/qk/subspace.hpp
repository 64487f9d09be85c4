#pragma once

#include <optional>
#include <vector>

#include "qk/matrix.hpp"

/*
 * Subspaces of k^n in canonical form: the basis is the unique RREF with
 * strictly increasing pivot columns and no zero rows, so two equal
 * subspaces have bit-identical bases and operator== is structural.
 */
namespace qk {

template <class F>
class Subspace {
public:
    using E = typename F::elem;

    Subspace() : ambient_(0) {}

    static Subspace zero(F f, int ambient) { return Subspace(Matrix<F>(f, 0, ambient), ambient); }

    static Subspace full(F f, int ambient) {
        return Subspace(Matrix<F>::identity(f, ambient), ambient);
    }

    /* Row space of `rows`, canonicalized. */
    static Subspace from_rows(const Matrix<F>& rows) {
        auto rr = rref(rows);
        return Subspace(rr.mat.block(0, 0, rr.rank, rows.cols()), rows.cols());
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return basis_.rows(); }
    const Matrix<F>& basis() const { return basis_; }
    const F& field() const { return basis_.field(); }

    /* Pivot columns of the canonical basis (one per basis row). */
    std::vector<int> pivots() const {
        std::vector<int> p;
        const F& f = basis_.field();
        for (int i = 0; i < basis_.rows(); ++i)
            for (int j = 0; j < basis_.cols(); ++j)
                if (!f.is_zero(basis_(i, j))) { p.push_back(j); break; }
        return p;
    }

    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && basis_ == o.basis_;
    }

private:
    Subspace(Matrix<F> basis, int ambient) : basis_(std::move(basis)), ambient_(ambient) {}

    Matrix<F> basis_; // RREF, full row rank
    int ambient_;
};

template <class F>
Subspace<F> subspace_sum(const Subspace<F>& a, const Subspace<F>& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw DimensionMismatch("subspace_sum: ambient " + std::to_string(a.ambient_dim()) +
                                " vs " + std::to_string(b.ambient_dim()));
    return Subspace<F>::from_rows(vstack(a.basis(), b.basis()));
}

/* V^perp under the standard dot pairing: the kernel of the basis matrix. */
template <class F>
Subspace<F> orthogonal_complement(const Subspace<F>& s) {
    return Subspace<F>::from_rows(kernel_rows(s.basis()));
}

template <class F>
Subspace<F> subspace_intersect(const Subspace<F>& a, const Subspace<F>& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw DimensionMismatch("subspace_intersect: ambient " + std::to_string(a.ambient_dim()) +
                                " vs " + std::to_string(b.ambient_dim()));
    // (U cap W) = (U^perp + W^perp)^perp
    return orthogonal_complement(
        subspace_sum(orthogonal_complement(a), orthogonal_complement(b)));
}

/* Kernel of m as a subspace of k^{cols(m)}. */
template <class F>
Subspace<F> kernel(const Matrix<F>& m) {
    return Subspace<F>::from_rows(kernel_rows(m));
}

/* Coordinates of v in the canonical basis rows, or nullopt if v is not in s.
 * In RREF the coordinate on row i is just v[pivot_i]; membership is then a
 * single exact comparison. */
template <class F>
std::optional<std::vector<typename F::elem>> solve_membership(
    const Subspace<F>& s, const std::vector<typename F::elem>& v) {
    const F& f = s.field();
    if (static_cast<int>(v.size()) != s.ambient_dim())
        throw DimensionMismatch("solve_membership: vector length " + std::to_string(v.size()) +
                                " vs ambient " + std::to_string(s.ambient_dim()));
    auto piv = s.pivots();
    std::vector<typename F::elem> coords(s.dim(), f.zero());
    for (int i = 0; i < s.dim(); ++i) coords[i] = v[piv[i]];
    // verify sum coords_i * row_i == v
    for (int j = 0; j < s.ambient_dim(); ++j) {
        auto acc = f.zero();
        for (int i = 0; i < s.dim(); ++i)
            acc = f.add(acc, f.mul(coords[i], s.basis()(i, j)));
        if (!(acc == v[j])) return std::nullopt;
    }
    return coords;
}

template <class F>
bool contains(const Subspace<F>& s, const std::vector<typename F::elem>& v) {
    return solve_membership(s, v).has_value();
}

} // namespace qk
