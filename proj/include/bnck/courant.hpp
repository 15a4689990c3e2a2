#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bnck/forms.hpp"
#include "bnck/liealg.hpp"
#include "bnck/linalg.hpp"
#include "bnck/report.hpp"
#include "bnck/scalar.hpp"

namespace bnck {

/// Element X + xi + lambda of g + g* + R in coordinates (x_1..x_n,
/// xi_1..xi_n, lambda).
template <class T>
class BnVec {
public:
    explicit BnVec(size_t n) : n_(n), c_(2 * n + 1, scalar_traits<T>::zero()) {}
    BnVec(size_t n, std::vector<T> coords) : n_(n), c_(std::move(coords)) {
        if (c_.size() != 2 * n + 1) throw std::invalid_argument("BnVec: coordinate count");
    }
    static BnVec from_parts(const std::vector<T>& x, const std::vector<T>& xi, const T& lambda) {
        BnVec v(x.size());
        for (size_t i = 0; i < x.size(); ++i) v.x(i) = x[i];
        for (size_t i = 0; i < xi.size(); ++i) v.xi(i) = xi[i];
        v.r() = lambda;
        return v;
    }

    size_t n() const { return n_; }
    T& x(size_t i) { return c_[i]; }
    const T& x(size_t i) const { return c_[i]; }
    T& xi(size_t i) { return c_[n_ + i]; }
    const T& xi(size_t i) const { return c_[n_ + i]; }
    T& r() { return c_[2 * n_]; }
    const T& r() const { return c_[2 * n_]; }
    const std::vector<T>& coords() const { return c_; }

    std::vector<T> vector_part() const { return std::vector<T>(c_.begin(), c_.begin() + n_); }
    std::vector<T> covector_part() const { return std::vector<T>(c_.begin() + n_, c_.begin() + 2 * n_); }

    friend BnVec operator+(const BnVec& a, const BnVec& b) {
        BnVec r(a.n_);
        for (size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
        return r;
    }
    friend BnVec operator-(const BnVec& a, const BnVec& b) {
        BnVec r(a.n_);
        for (size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
        return r;
    }
    friend BnVec operator*(const T& s, const BnVec& a) {
        BnVec r(a.n_);
        for (size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = s * a.c_[i];
        return r;
    }
    BnVec operator-() const { return T(Scalar(-1)) * *this; }
    friend bool operator==(const BnVec& a, const BnVec& b) { return a.c_ == b.c_; }

    bool is_zero() const {
        for (auto& v : c_)
            if (!scalar_traits<T>::is_zero(v)) return false;
        return true;
    }
    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < c_.size(); ++i) {
            s += str_of(c_[i]);
            if (i + 1 < c_.size()) s += ",";
        }
        return s + ")";
    }

private:
    static std::string str_of(const Scalar& v) { return v.str(); }
    static std::string str_of(const CScalar& v) { return v.str(); }
    size_t n_;
    std::vector<T> c_;
};

using BnElement = BnVec<Scalar>;
using CBnElement = BnVec<CScalar>;

inline CBnElement complexify(const BnElement& v) { return CBnElement(v.n(), complexify(v.coords())); }

/// <X+xi+lambda, Y+eta+mu> = 1/2(eta(X) + xi(Y)) + lambda mu.
template <class T>
T scalar_product(const BnVec<T>& u, const BnVec<T>& v) {
    if (u.n() != v.n()) throw std::invalid_argument("scalar_product: dimension mismatch");
    T s = scalar_traits<T>::zero();
    for (size_t i = 0; i < u.n(); ++i) s += u.x(i) * v.xi(i) + u.xi(i) * v.x(i);
    T half = T(Scalar(1, 2));
    return half * s + u.r() * v.r();
}

/// Gram matrix of the pairing in the (TM, T*M, R) coordinate basis.
inline RMatrix pairing_gram(size_t n) {
    RMatrix g(2 * n + 1, 2 * n + 1);
    for (size_t i = 0; i < n; ++i) {
        g(i, n + i) = Scalar(1, 2);
        g(n + i, i) = Scalar(1, 2);
    }
    g(2 * n, 2 * n) = Scalar(1);
    return g;
}

/// Endomorphism of g + g* + R as a (2n+1)x(2n+1) matrix in block order
/// (TM, T*M, R).
using BnEndo = RMatrix;

inline bool pairing_skew(size_t n, const BnEndo& M) {
    RMatrix G = pairing_gram(n);
    RMatrix GM = G * M;
    return GM == -GM.transpose();
}

template <class T>
BnVec<T> apply_endo(const BnEndo& M, const BnVec<T>& v) {
    Matrix<T> mm(M.rows(), M.cols());
    for (size_t i = 0; i < M.rows(); ++i)
        for (size_t j = 0; j < M.cols(); ++j) mm(i, j) = T(M(i, j));
    return BnVec<T>(v.n(), mm.apply(v.coords()));
}

/// Courant algebroid of type Bn over a Lie algebra, twisted by (H, F):
/// requires dF = 0 and dH = -F^F at construction.
class BnAlgebroid {
public:
    BnAlgebroid(LieAlgebra L, KForm H, KForm F) : L_(std::move(L)), H_(std::move(H)), F_(std::move(F)) {
        size_t n = L_.dim();
        if (H_.dim() != n || H_.degree() != 3) throw std::invalid_argument("BnAlgebroid: H must be a 3-form");
        if (F_.dim() != n || F_.degree() != 2) throw std::invalid_argument("BnAlgebroid: F must be a 2-form");
        if (!L_.jacobi_check().pass()) throw std::invalid_argument("BnAlgebroid: Jacobi identity fails");
        if (!ce_differential(L_, F_).is_zero()) throw std::invalid_argument("BnAlgebroid: F is not closed");
        KForm rhs = ce_differential(L_, H_) + wedge(F_, F_);
        if (!rhs.is_zero()) throw std::invalid_argument("BnAlgebroid: twist condition dH = -F^F fails");
    }
    static BnAlgebroid untwisted(LieAlgebra L) {
        size_t n = L.dim();
        return BnAlgebroid(std::move(L), KForm(n, 3), KForm(n, 2));
    }

    const LieAlgebra& algebra() const { return L_; }
    const KForm& H() const { return H_; }
    const KForm& F() const { return F_; }
    size_t n() const { return L_.dim(); }
    size_t rank() const { return 2 * L_.dim() + 1; }

    BnElement basis_section(size_t a) const {
        BnElement v(n());
        std::vector<Scalar> c(rank(), Scalar(0));
        c[a] = Scalar(1);
        return BnElement(n(), c);
    }

    /// Twisted Dorfman bracket on left-invariant sections. With u =
    /// (X, xi, lambda), v = (Y, eta, mu):
    ///   vector part  [X, Y]
    ///   1-form part  (Z) = -eta([X,Z]) + xi([Y,Z]) - H(X,Y,Z)
    ///                      - 2 mu F(X,Z) + 2 lambda F(Y,Z)
    ///   R part       F(X, Y)
    BnElement dorfman(const BnElement& u, const BnElement& v) const { return dorfman_impl(u, v); }
    CBnElement dorfman(const CBnElement& u, const CBnElement& v) const { return dorfman_impl(u, v); }

    /// Anchor: projection to the vector part.
    std::vector<Scalar> anchor(const BnElement& u) const { return u.vector_part(); }

    /// (L_u T)(v) = [u, Tv] - T[u, v], evaluated on the coordinate basis.
    BnEndo dorfman_lie_derivative(const BnElement& u, const BnEndo& T) const {
        size_t r = rank();
        BnEndo out(r, r);
        for (size_t j = 0; j < r; ++j) {
            BnElement bj = basis_section(j);
            BnElement col = dorfman(u, apply_endo(T, bj)) - apply_endo(T, dorfman(u, bj));
            for (size_t i = 0; i < r; ++i) out(i, j) = col.coords()[i];
        }
        return out;
    }

    Report check_axioms() const;

private:
    template <class T>
    BnVec<T> dorfman_impl(const BnVec<T>& u, const BnVec<T>& v) const {
        size_t n = L_.dim();
        if (u.n() != n || v.n() != n) throw std::invalid_argument("dorfman: dimension mismatch");
        auto X = u.vector_part();
        auto Y = v.vector_part();
        auto xi = u.covector_part();
        auto eta = v.covector_part();
        T lambda = u.r(), mu = v.r();
        BnVec<T> out(n);
        auto xy = L_.bracket(X, Y);
        for (size_t k = 0; k < n; ++k) out.x(k) = xy[k];
        T two(Scalar(2));
        for (size_t z = 0; z < n; ++z) {
            auto ezc = std::vector<T>();  // basis vector in T coords
            ezc.resize(n, scalar_traits<T>::zero());
            ezc[z] = scalar_traits<T>::one();
            auto bxz = L_.bracket(X, ezc);
            auto byz = L_.bracket(Y, ezc);
            T term = scalar_traits<T>::zero();
            for (size_t m = 0; m < n; ++m) term += xi[m] * byz[m] - eta[m] * bxz[m];
            // -H(X,Y,e_z)
            T h = scalar_traits<T>::zero();
            for (size_t a = 0; a < n; ++a)
                for (size_t b = 0; b < n; ++b) {
                    Scalar c = H_.coeff({a, b, z});
                    if (!c.is_zero()) h += X[a] * Y[b] * T(c);
                }
            term -= h;
            // -2 mu F(X, e_z) + 2 lambda F(Y, e_z)
            T f = scalar_traits<T>::zero();
            for (size_t a = 0; a < n; ++a) {
                Scalar c = F_.coeff({a, z});
                if (!c.is_zero()) f += (two * lambda * Y[a] - two * mu * X[a]) * T(c);
            }
            out.xi(z) = term + f;
        }
        T fxy = scalar_traits<T>::zero();
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b) {
                Scalar c = F_.coeff({a, b});
                if (!c.is_zero()) fxy += X[a] * Y[b] * T(c);
            }
        out.r() = fxy;
        return out;
    }

    LieAlgebra L_;
    KForm H_, F_;
};

/// Axioms over all basis triples of left-invariant sections. C3 degenerates
/// to bilinearity for constant coefficients and is recorded, not asserted;
/// C2 is checked as a consistency probe although redundant.
inline Report BnAlgebroid::check_axioms() const {
    Report rep;
    size_t r = rank();
    auto basis = [&](size_t a) { return basis_section(a); };

    bool c1 = true;
    std::string w1;
    for (size_t a = 0; a < r && c1; ++a)
        for (size_t b = 0; b < r && c1; ++b)
            for (size_t c = 0; c < r; ++c) {
                BnElement lhs = dorfman(basis(a), dorfman(basis(b), basis(c)));
                BnElement rhs =
                    dorfman(dorfman(basis(a), basis(b)), basis(c)) + dorfman(basis(b), dorfman(basis(a), basis(c)));
                if (!(lhs - rhs).is_zero()) {
                    c1 = false;
                    w1 = "triple (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "," +
                         std::to_string(c + 1) + ")";
                    break;
                }
            }
    rep.add("C1 Leibniz identity [u,[v,w]] = [[u,v],w] + [v,[u,w]]", c1, w1);

    bool c2 = true;
    std::string w2;
    for (size_t a = 0; a < r && c2; ++a)
        for (size_t b = 0; b < r; ++b) {
            auto lhs = anchor(dorfman(basis(a), basis(b)));
            auto rhs = L_.bracket(anchor(basis(a)), anchor(basis(b)));
            for (size_t k = 0; k < n(); ++k)
                if (!(lhs[k] - rhs[k]).is_zero()) {
                    c2 = false;
                    w2 = "pair (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
                    break;
                }
            if (!c2) break;
        }
    rep.add("C2 anchor morphism pi([u,v]) = [pi(u),pi(v)]", c2, w2);

    rep.add("C3 Leibniz rule degenerates to bilinearity for constant coefficients (recorded)", true);

    // C4 with constant pairings: <[u,v],w> + <v,[u,w]> = 0.
    bool c4 = true;
    std::string w4;
    for (size_t a = 0; a < r && c4; ++a)
        for (size_t b = 0; b < r && c4; ++b)
            for (size_t c = 0; c < r; ++c) {
                Scalar s = scalar_product(dorfman(basis(a), basis(b)), basis(c)) +
                           scalar_product(basis(b), dorfman(basis(a), basis(c)));
                if (!s.is_zero()) {
                    c4 = false;
                    w4 = "triple (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "," +
                         std::to_string(c + 1) + ") residual " + s.str();
                    break;
                }
            }
    rep.add("C4 pairing invariance <[u,v],w> + <v,[u,w]> = 0", c4, w4);

    // C5 polarized over basis pairs: <[u,v]+[v,u], w> = 0.
    bool c5 = true;
    std::string w5;
    for (size_t a = 0; a < r && c5; ++a)
        for (size_t b = a; b < r && c5; ++b) {
            BnElement s = dorfman(basis(a), basis(b)) + dorfman(basis(b), basis(a));
            for (size_t c = 0; c < r; ++c) {
                Scalar v = scalar_product(s, basis(c));
                if (!v.is_zero()) {
                    c5 = false;
                    w5 = "pair (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
                    break;
                }
            }
        }
    rep.add("C5 symmetric part <[u,u],v> = 0 (polarized over basis pairs)", c5, w5);
    return rep;
}

/// Isomorphism removing (b, A) from a generalized metric:
///   Htilde = H - db - (2F + dA)^A,  Ftilde = F + dA,
///   I(X) = X - A(X) - i_X b - A(X) A,  I(eta) = eta,  I(mu) = 2 mu A + mu.
struct TwistResult {
    BnEndo iso;
    BnAlgebroid twisted;
};
inline TwistResult twist_isomorphism(const BnAlgebroid& A, const KForm& b, const KForm& a_form) {
    size_t n = A.n();
    if (b.dim() != n || b.degree() != 2) throw std::invalid_argument("twist_isomorphism: b must be a 2-form");
    if (a_form.dim() != n || a_form.degree() != 1)
        throw std::invalid_argument("twist_isomorphism: A must be a 1-form");
    const LieAlgebra& L = A.algebra();
    KForm dA = ce_differential(L, a_form);
    KForm db = ce_differential(L, b);
    KForm two_F_plus_dA = Scalar(2) * A.F() + dA;
    KForm Ht = A.H() - db - wedge(two_F_plus_dA, a_form);
    KForm Ft = A.F() + dA;

    BnEndo I(2 * n + 1, 2 * n + 1);
    for (size_t i = 0; i < n; ++i) {
        Scalar Ai = a_form.coeff({i});
        I(i, i) = Scalar(1);
        I(2 * n, i) = -Ai;                                               // R part of I(e_i)
        for (size_t z = 0; z < n; ++z) {
            I(n + z, i) = -b.coeff({i, z}) - Ai * a_form.coeff({z});     // -i_X b - A(X) A
        }
        I(n + i, n + i) = Scalar(1);                                     // I(eta) = eta
        I(n + i, 2 * n) = Scalar(2) * Ai;                                // 2 mu A
    }
    I(2 * n, 2 * n) = Scalar(1);
    return {I, BnAlgebroid(L, Ht, Ft)};
}

}  // namespace bnck
