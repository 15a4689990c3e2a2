#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "bnck/liealg.hpp"
#include "bnck/linalg.hpp"
#include "bnck/scalar.hpp"

namespace bnck {

namespace detail {
inline size_t binom(size_t n, size_t k) {
    if (k > n) return 0;
    size_t r = 1;
    for (size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}
/// Lexicographic rank of a strictly increasing index tuple.
inline size_t combo_rank(const std::vector<size_t>& idx, size_t n) {
    size_t k = idx.size(), rank = 0, prev = 0;
    for (size_t a = 0; a < k; ++a) {
        for (size_t v = prev; v < idx[a]; ++v) rank += binom(n - 1 - v, k - 1 - a);
        prev = idx[a] + 1;
    }
    return rank;
}
inline std::vector<std::vector<size_t>> combos(size_t n, size_t k) {
    std::vector<std::vector<size_t>> out;
    std::vector<size_t> cur(k);
    for (size_t i = 0; i < k; ++i) cur[i] = i;
    if (k > n) return out;
    while (true) {
        out.push_back(cur);
        size_t a = k;
        while (a-- > 0) {
            if (cur[a] + 1 <= n - (k - a)) {
                ++cur[a];
                for (size_t b = a + 1; b < k; ++b) cur[b] = cur[b - 1] + 1;
                break;
            }
            if (a == 0) return out;
        }
        if (k == 0) return out;
    }
}
/// Sorts indices, returning the permutation sign, or 0 on duplicates.
inline int sort_sign(std::vector<size_t>& idx) {
    int sign = 1;
    for (size_t a = 0; a + 1 < idx.size(); ++a)
        for (size_t b = 0; b + 1 < idx.size() - a; ++b)
            if (idx[b] > idx[b + 1]) {
                std::swap(idx[b], idx[b + 1]);
                sign = -sign;
            }
    for (size_t a = 0; a + 1 < idx.size(); ++a)
        if (idx[a] == idx[a + 1]) return 0;
    return sign;
}
}  // namespace detail

/// Left-invariant alternating k-form, stored by coefficients on strictly
/// increasing basis index tuples.
class KForm {
public:
    KForm() : n_(0), k_(0) {}
    KForm(size_t n, size_t k) : n_(n), k_(k), coef_(detail::binom(n, k), Scalar(0)) {}

    size_t dim() const { return n_; }
    size_t degree() const { return k_; }

    /// Coefficient on arbitrary indices (sign-adjusted, 0 on duplicates).
    Scalar coeff(std::vector<size_t> idx) const {
        check_arity(idx);
        int s = detail::sort_sign(idx);
        if (s == 0) return Scalar(0);
        return Scalar(s) * coef_[detail::combo_rank(idx, n_)];
    }
    /// Adds v on the (possibly unsorted) index tuple.
    void add_term(std::vector<size_t> idx, const Scalar& v) {
        check_arity(idx);
        int s = detail::sort_sign(idx);
        if (s == 0) {
            if (!v.is_zero()) throw std::invalid_argument("KForm: repeated index");
            return;
        }
        coef_[detail::combo_rank(idx, n_)] += Scalar(s) * v;
    }
    void set_term(std::vector<size_t> idx, const Scalar& v) {
        check_arity(idx);
        int s = detail::sort_sign(idx);
        if (s == 0) throw std::invalid_argument("KForm: repeated index");
        coef_[detail::combo_rank(idx, n_)] = Scalar(s) * v;
    }

    bool is_zero() const {
        for (auto& v : coef_)
            if (!v.is_zero()) return false;
        return true;
    }

    friend KForm operator+(const KForm& a, const KForm& b) {
        a.check_same(b);
        KForm r = a;
        for (size_t i = 0; i < r.coef_.size(); ++i) r.coef_[i] += b.coef_[i];
        return r;
    }
    friend KForm operator-(const KForm& a, const KForm& b) {
        a.check_same(b);
        KForm r = a;
        for (size_t i = 0; i < r.coef_.size(); ++i) r.coef_[i] -= b.coef_[i];
        return r;
    }
    friend KForm operator*(const Scalar& s, const KForm& a) {
        KForm r = a;
        for (auto& v : r.coef_) v = s * v;
        return r;
    }
    KForm operator-() const { return Scalar(-1) * *this; }
    friend bool operator==(const KForm& a, const KForm& b) {
        if (a.n_ != b.n_ || a.k_ != b.k_) return false;
        for (size_t i = 0; i < a.coef_.size(); ++i)
            if (a.coef_[i] != b.coef_[i]) return false;
        return true;
    }
    friend bool operator!=(const KForm& a, const KForm& b) { return !(a == b); }

    /// Multilinear evaluation; arguments may be complex.
    template <class T>
    T eval(const std::vector<std::vector<T>>& args) const {
        if (args.size() != k_) throw std::invalid_argument("KForm: evaluation arity");
        T total = scalar_traits<T>::zero();
        for (auto& I : detail::combos(n_, k_)) {
            Scalar c = coef_[detail::combo_rank(I, n_)];
            if (c.is_zero()) continue;
            Matrix<T> minor(k_, k_);
            for (size_t a = 0; a < k_; ++a)
                for (size_t b = 0; b < k_; ++b) minor(a, b) = args[a][I[b]];
            total += T(c) * minor.det();
        }
        return total;
    }
    Scalar eval(const std::vector<std::vector<Scalar>>& args) const { return eval<Scalar>(args); }

    /// Interior product i_X omega for a real vector.
    KForm interior(const std::vector<Scalar>& x) const {
        if (k_ == 0) throw std::invalid_argument("KForm: interior product of a 0-form");
        KForm r(n_, k_ - 1);
        for (auto& I : detail::combos(n_, k_)) {
            Scalar c = coef_[detail::combo_rank(I, n_)];
            if (c.is_zero()) continue;
            for (size_t pos = 0; pos < k_; ++pos) {
                std::vector<size_t> rest;
                for (size_t a = 0; a < k_; ++a)
                    if (a != pos) rest.push_back(I[a]);
                Scalar sign((pos % 2 == 0) ? 1 : -1);
                r.add_term(rest, sign * x[I[pos]] * c);
            }
        }
        return r;
    }

    /// Serialization, one record per nonzero sorted coefficient.
    std::vector<std::pair<std::vector<size_t>, Scalar>> terms() const {
        std::vector<std::pair<std::vector<size_t>, Scalar>> out;
        for (auto& I : detail::combos(n_, k_)) {
            Scalar c = coef_[detail::combo_rank(I, n_)];
            if (!c.is_zero()) out.push_back({I, c});
        }
        return out;
    }

private:
    void check_arity(const std::vector<size_t>& idx) const {
        if (idx.size() != k_) throw std::invalid_argument("KForm: index arity");
        for (size_t v : idx)
            if (v >= n_) throw std::invalid_argument("KForm: index out of range");
    }
    void check_same(const KForm& o) const {
        if (n_ != o.n_ || k_ != o.k_) throw std::invalid_argument("KForm: shape mismatch");
    }
    size_t n_, k_;
    std::vector<Scalar> coef_;
};

/// Shuffle-convention wedge: (a^b)(x_1..x_{p+q}) sums over shuffles with
/// sign, so (e1*^e2*)(e1,e2) = 1.
inline KForm wedge(const KForm& a, const KForm& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
    size_t n = a.dim(), p = a.degree(), q = b.degree();
    KForm r(n, p + q);
    if (p + q > n) return r;
    for (auto& C : detail::combos(n, p + q)) {
        Scalar total(0);
        // choose which positions of C go to a
        for (auto& S : detail::combos(p + q, p)) {
            std::vector<size_t> ia, ib;
            std::vector<bool> in_a(p + q, false);
            for (size_t s : S) in_a[s] = true;
            for (size_t t = 0; t < p + q; ++t) (in_a[t] ? ia : ib).push_back(C[t]);
            int inversions = 0;  // sign of the (ia, ib) shuffle
            for (size_t s : S) {
                size_t before = 0;
                for (size_t t = 0; t < s; ++t)
                    if (!in_a[t]) ++before;
                inversions += (int)before;
            }
            Scalar sign((inversions % 2 == 0) ? 1 : -1);
            total += sign * a.coeff(ia) * b.coeff(ib);
        }
        r.set_term(C, total);
    }
    return r;
}

/// Chevalley-Eilenberg differential on left-invariant forms:
/// (d w)(x_0..x_k) = sum_{i<j} (-1)^{i+j} w([x_i,x_j], x_0..^i..^j..x_k).
inline KForm ce_differential(const LieAlgebra& L, const KForm& w) {
    size_t n = L.dim(), k = w.degree();
    if (w.dim() != n) throw std::invalid_argument("ce_differential: dimension mismatch");
    KForm r(n, k + 1);
    if (k + 1 > n) return r;
    for (auto& I : detail::combos(n, k + 1)) {
        Scalar total(0);
        for (size_t a = 0; a < k + 1; ++a)
            for (size_t b = a + 1; b < k + 1; ++b) {
                std::vector<size_t> rest;
                for (size_t t = 0; t < k + 1; ++t)
                    if (t != a && t != b) rest.push_back(I[t]);
                Scalar sign(((a + b) % 2 == 0) ? 1 : -1);  // (-1)^{a+b}, 0-based a<b
                for (size_t m = 0; m < n; ++m) {
                    Scalar c = L.c(I[a], I[b], m);
                    if (c.is_zero()) continue;
                    std::vector<size_t> args;
                    args.push_back(m);
                    for (size_t t : rest) args.push_back(t);
                    total += sign * c * w.coeff(args);
                }
            }
        r.set_term(I, total);
    }
    return r;
}

}  // namespace bnck
