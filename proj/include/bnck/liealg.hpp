#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bnck/linalg.hpp"
#include "bnck/report.hpp"
#include "bnck/scalar.hpp"

namespace bnck {

/// Finite-dimensional Lie algebra given by structure constants in a fixed
/// basis: [e_i, e_j] = sum_k c(i,j,k) e_k. Antisymmetry is maintained by
/// construction; the Jacobi identity is checked on demand.
class LieAlgebra {
public:
    explicit LieAlgebra(size_t n) : n_(n), c_(n * n * n, Scalar(0)) {
        if (n == 0) throw std::invalid_argument("LieAlgebra: dimension must be positive");
    }

    size_t dim() const { return n_; }

    Scalar c(size_t i, size_t j, size_t k) const { return c_[(i * n_ + j) * n_ + k]; }

    /// Sets [e_i, e_j] = ... + v e_k (and the antisymmetric partner).
    void set_bracket(size_t i, size_t j, size_t k, const Scalar& v) {
        if (i == j && !v.is_zero()) throw std::invalid_argument("LieAlgebra: [e_i,e_i] must vanish");
        c_[(i * n_ + j) * n_ + k] = v;
        c_[(j * n_ + i) * n_ + k] = -v;
    }

    std::vector<Scalar> bracket(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const {
        return bracket_impl(x, y);
    }
    std::vector<CScalar> bracket(const std::vector<CScalar>& x, const std::vector<CScalar>& y) const {
        return bracket_impl(x, y);
    }

    /// ad_x as a matrix: ad_x(y) = [x, y].
    RMatrix ad(const std::vector<Scalar>& x) const {
        RMatrix m(n_, n_);
        for (size_t j = 0; j < n_; ++j)
            for (size_t i = 0; i < n_; ++i)
                for (size_t k = 0; k < n_; ++k) m(k, j) += x[i] * c(i, j, k);
        return m;
    }

    bool is_abelian() const {
        for (auto& v : c_)
            if (!v.is_zero()) return false;
        return true;
    }

    std::vector<Scalar> basis_vector(size_t i) const {
        std::vector<Scalar> v(n_, Scalar(0));
        v[i] = Scalar(1);
        return v;
    }

    /// Jacobi identity over all basis triples i<j<k; failures cite the triple.
    Report jacobi_check() const {
        Report rep;
        bool all_ok = true;
        std::string witness;
        for (size_t i = 0; i < n_ && all_ok; ++i)
            for (size_t j = i + 1; j < n_ && all_ok; ++j)
                for (size_t k = j + 1; k < n_ && all_ok; ++k) {
                    auto ei = basis_vector(i), ej = basis_vector(j), ek = basis_vector(k);
                    auto s = bracket(bracket(ei, ej), ek);
                    auto t = bracket(bracket(ej, ek), ei);
                    auto u = bracket(bracket(ek, ei), ej);
                    for (size_t m = 0; m < n_; ++m) {
                        if (!(s[m] + t[m] + u[m]).is_zero()) {
                            all_ok = false;
                            witness = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                                      std::to_string(k + 1) + ")";
                            break;
                        }
                    }
                }
        rep.add("jacobi identity on all basis triples", all_ok, witness);
        return rep;
    }

private:
    template <class T>
    std::vector<T> bracket_impl(const std::vector<T>& x, const std::vector<T>& y) const {
        if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("LieAlgebra: bracket arity");
        std::vector<T> r(n_, scalar_traits<T>::zero());
        for (size_t i = 0; i < n_; ++i) {
            if (scalar_traits<T>::is_zero(x[i])) continue;
            for (size_t j = 0; j < n_; ++j) {
                if (scalar_traits<T>::is_zero(y[j])) continue;
                for (size_t k = 0; k < n_; ++k) {
                    Scalar sc = c(i, j, k);
                    if (!sc.is_zero()) r[k] += x[i] * y[j] * T(sc);
                }
            }
        }
        return r;
    }

    size_t n_;
    std::vector<Scalar> c_;
};

/// Nondegenerate symmetric bilinear form on the algebra in the fixed basis.
class PseudoMetric {
public:
    explicit PseudoMetric(RMatrix g) : g_(std::move(g)) {
        if (g_.rows() != g_.cols()) throw std::invalid_argument("PseudoMetric: non-square");
        if (g_ != g_.transpose()) throw std::invalid_argument("PseudoMetric: not symmetric");
        if (g_.det().is_zero()) throw std::invalid_argument("PseudoMetric: degenerate");
        ginv_ = g_.inverse();
    }
    static PseudoMetric diagonal(const std::vector<Scalar>& d) {
        RMatrix g(d.size(), d.size());
        for (size_t i = 0; i < d.size(); ++i) g(i, i) = d[i];
        return PseudoMetric(g);
    }

    size_t dim() const { return g_.rows(); }
    const RMatrix& matrix() const { return g_; }
    const RMatrix& inverse() const { return ginv_; }

    Scalar inner(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const {
        return inner_impl<Scalar>(x, y);
    }
    CScalar inner(const std::vector<CScalar>& x, const std::vector<CScalar>& y) const {
        return inner_impl<CScalar>(x, y);
    }
    /// Musical isomorphisms: flat lowers (vector -> covector coordinates),
    /// sharp raises.
    std::vector<Scalar> flat(const std::vector<Scalar>& x) const { return g_.apply(x); }
    std::vector<Scalar> sharp(const std::vector<Scalar>& xi) const { return ginv_.apply(xi); }
    std::vector<CScalar> flat(const std::vector<CScalar>& x) const { return complexify(g_).apply(x); }
    std::vector<CScalar> sharp(const std::vector<CScalar>& xi) const { return complexify(ginv_).apply(xi); }

    /// (pos, neg) eigenvalue sign counts, via Jacobi/Sylvester iteration on
    /// leading principal minors with symmetric pivoting fallback.
    std::pair<int, int> signature() const;

    bool is_skew(const RMatrix& A) const {
        RMatrix gA = g_ * A;
        return gA == -gA.transpose();
    }

private:
    template <class T>
    T inner_impl(const std::vector<T>& x, const std::vector<T>& y) const {
        if (x.size() != dim() || y.size() != dim()) throw std::invalid_argument("PseudoMetric: arity");
        T r = scalar_traits<T>::zero();
        for (size_t i = 0; i < dim(); ++i)
            for (size_t j = 0; j < dim(); ++j) {
                Scalar gij = g_(i, j);
                if (!gij.is_zero()) r += x[i] * y[j] * T(gij);
            }
        return r;
    }
    RMatrix g_, ginv_;
};

/// Left-invariant connection nabla_{e_i} e_j = sum_k Gamma(i,j,k) e_k.
class Connection {
public:
    explicit Connection(size_t n) : n_(n), gamma_(n * n * n, Scalar(0)) {}
    size_t dim() const { return n_; }
    Scalar gamma(size_t i, size_t j, size_t k) const { return gamma_[(i * n_ + j) * n_ + k]; }
    void set_gamma(size_t i, size_t j, size_t k, const Scalar& v) { gamma_[(i * n_ + j) * n_ + k] = v; }

    /// nabla_{e_i} applied to a (possibly complex) vector.
    template <class T>
    std::vector<T> derive(size_t i, const std::vector<T>& y) const {
        std::vector<T> r(n_, scalar_traits<T>::zero());
        for (size_t j = 0; j < n_; ++j) {
            if (scalar_traits<T>::is_zero(y[j])) continue;
            for (size_t k = 0; k < n_; ++k) {
                Scalar g = gamma(i, j, k);
                if (!g.is_zero()) r[k] += y[j] * T(g);
            }
        }
        return r;
    }
    std::vector<Scalar> derive_along(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const {
        std::vector<Scalar> r(n_, Scalar(0));
        for (size_t i = 0; i < n_; ++i) {
            if (x[i].is_zero()) continue;
            auto d = derive(i, y);
            for (size_t k = 0; k < n_; ++k) r[k] += x[i] * d[k];
        }
        return r;
    }
    /// Matrix of nabla_{e_i}.
    RMatrix direction_matrix(size_t i) const {
        RMatrix m(n_, n_);
        for (size_t j = 0; j < n_; ++j)
            for (size_t k = 0; k < n_; ++k) m(k, j) = gamma(i, j, k);
        return m;
    }

private:
    size_t n_;
    std::vector<Scalar> gamma_;
};

/// Sign counts by symmetric (congruence) elimination.
inline std::pair<int, int> symmetric_signature(RMatrix A) {
    size_t n = A.rows();
    int pos = 0, neg = 0;
    std::vector<bool> done(n, false);
    for (size_t step = 0; step < n; ++step) {
        size_t p = n;
        for (size_t i = 0; i < n; ++i)
            if (!done[i] && !A(i, i).is_zero()) {
                p = i;
                break;
            }
        if (p == n) {
            // no nonzero diagonal: make one from an off-diagonal pair
            size_t a = n, b = n;
            for (size_t i = 0; i < n && a == n; ++i)
                for (size_t j = i + 1; j < n; ++j)
                    if (!done[i] && !done[j] && !A(i, j).is_zero()) {
                        a = i;
                        b = j;
                        break;
                    }
            if (a == n) break;  // remaining block is zero
            for (size_t k = 0; k < n; ++k) A(a, k) += A(b, k);
            for (size_t k = 0; k < n; ++k) A(k, a) += A(k, b);
            p = a;
        }
        Scalar d = A(p, p);
        if (d.sign() > 0)
            ++pos;
        else
            ++neg;
        for (size_t i = 0; i < n; ++i) {
            if (i == p || done[i] || A(i, p).is_zero()) continue;
            Scalar f = A(i, p) / d;
            for (size_t k = 0; k < n; ++k) A(i, k) -= f * A(p, k);
            for (size_t k = 0; k < n; ++k) A(k, i) -= f * A(k, p);
        }
        done[p] = true;
    }
    return {pos, neg};
}

inline std::pair<int, int> PseudoMetric::signature() const { return symmetric_signature(g_); }

/// Unique metric torsion-free connection, from the Koszul formula on
/// left-invariant fields: 2g(nabla_{e_i} e_j, e_k) = g([e_i,e_j],e_k)
/// - g([e_j,e_k],e_i) + g([e_k,e_i],e_j).
inline Connection levi_civita(const LieAlgebra& L, const PseudoMetric& g) {
    size_t n = L.dim();
    if (g.dim() != n) throw std::invalid_argument("levi_civita: dimension mismatch");
    Connection conn(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::vector<Scalar> rhs(n, Scalar(0));
            auto ei = L.basis_vector(i), ej = L.basis_vector(j);
            auto bij = L.bracket(ei, ej);
            for (size_t k = 0; k < n; ++k) {
                auto ek = L.basis_vector(k);
                Scalar v = g.inner(bij, ek) - g.inner(L.bracket(ej, ek), ei) + g.inner(L.bracket(ek, ei), ej);
                rhs[k] = v / Scalar(2);
            }
            auto coeffs = g.inverse().apply(rhs);
            for (size_t k = 0; k < n; ++k) conn.set_gamma(i, j, k, coeffs[k]);
        }
    return conn;
}

/// Kernel of {X : g(nabla_Y X, Z) + g(nabla_Z X, Y) = 0 for all Y, Z},
/// assembled as an explicit linear system over the basis.
inline Subspace killing_fields(const LieAlgebra& L, const PseudoMetric& g) {
    size_t n = L.dim();
    Connection conn = levi_civita(L, g);
    RMatrix sys(0, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            std::vector<Scalar> rowv(n, Scalar(0));
            for (size_t m = 0; m < n; ++m) {
                auto em = L.basis_vector(m);
                rowv[m] = g.inner(conn.derive(i, em), L.basis_vector(j)) +
                          g.inner(conn.derive(j, em), L.basis_vector(i));
            }
            sys.append_row(rowv);
        }
    CMatrix csys = complexify(sys);
    return Subspace(n, csys.kernel());
}

/// Unimodular kernel {x : trace(ad_x) = 0} and whether it is everything.
inline std::pair<bool, Subspace> unimodular_data(const LieAlgebra& L) {
    size_t n = L.dim();
    RMatrix sys(1, n);
    for (size_t m = 0; m < n; ++m) {
        Scalar tr(0);
        RMatrix adm = L.ad(L.basis_vector(m));
        for (size_t k = 0; k < n; ++k) tr += adm(k, k);
        sys(0, m) = tr;
    }
    Subspace ker(n, complexify(sys).kernel());
    return {ker.rank() == n, ker};
}

/// D is a derivation iff D[x,y] = [Dx,y] + [x,Dy] on all basis pairs.
inline Report is_derivation(const LieAlgebra& L, const RMatrix& D) {
    size_t n = L.dim();
    Report rep;
    if (D.rows() != n || D.cols() != n) {
        rep.add("derivation matrix shape", false, "expected " + std::to_string(n) + "x" + std::to_string(n));
        return rep;
    }
    bool ok = true;
    std::string witness;
    for (size_t i = 0; i < n && ok; ++i)
        for (size_t j = i + 1; j < n && ok; ++j) {
            auto ei = L.basis_vector(i), ej = L.basis_vector(j);
            auto lhs = D.apply(L.bracket(ei, ej));
            auto rhs = L.bracket(D.apply(ei), ej);
            auto rhs2 = L.bracket(ei, D.apply(ej));
            for (size_t k = 0; k < n; ++k)
                if (!(lhs[k] - rhs[k] - rhs2[k]).is_zero()) {
                    ok = false;
                    witness = "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
                    break;
                }
        }
    rep.add("Leibniz rule on all basis pairs", ok, witness);
    return rep;
}

/// dim-3 only: the endomorphism with [u,v] = L(u x v), where the cross
/// product is fixed by g and the orientation via g(u x v, w) = vol(u,v,w),
/// vol = s e1*^e2*^e3*, s = sqrt|det g|. Exact when |det g| is a perfect
/// square, numeric otherwise.
inline RMatrix canonical_operator_L(const LieAlgebra& L, const PseudoMetric& g, int orientation = 1) {
    if (L.dim() != 3) throw std::invalid_argument("canonical_operator_L: dimension must be 3");
    if (orientation != 1 && orientation != -1)
        throw std::invalid_argument("canonical_operator_L: orientation must be +1 or -1");
    Scalar absdet = g.matrix().det().abs();
    Scalar s = [&] {
        auto r = absdet.sqrt();
        if (r) return Scalar(orientation) * *r;
        return Scalar(orientation) * *absdet.as_numeric().sqrt();
    }();
    // cross(e_i, e_j) = g^{-1}( w -> s * eps_{ijw} )
    auto cross = [&](size_t i, size_t j) {
        std::vector<Scalar> cov(3, Scalar(0));
        for (size_t w = 0; w < 3; ++w) {
            int e = 0;  // Levi-Civita symbol eps(i,j,w)
            if (i != j && j != w && i != w) {
                e = 1;
                size_t p[3] = {i, j, w};
                int inversions = 0;
                for (int a = 0; a < 3; ++a)
                    for (int b = a + 1; b < 3; ++b)
                        if (p[a] > p[b]) ++inversions;
                e = (inversions % 2 == 0) ? 1 : -1;
            }
            cov[w] = Scalar(e) * s;
        }
        return g.sharp(cov);
    };
    RMatrix C(3, 3), B(3, 3);
    size_t pairs[3][2] = {{1, 2}, {2, 0}, {0, 1}};
    for (size_t col = 0; col < 3; ++col) {
        auto cr = cross(pairs[col][0], pairs[col][1]);
        auto br = L.bracket(L.basis_vector(pairs[col][0]), L.basis_vector(pairs[col][1]));
        for (size_t r = 0; r < 3; ++r) {
            C(r, col) = cr[r];
            B(r, col) = br[r];
        }
    }
    return B * C.inverse();
}

}  // namespace bnck
