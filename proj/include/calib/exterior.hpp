#pragma once

// Dense exterior algebra over an oriented inner-product space of dimension <= 8.
// Coefficients are stored against covector monomials e^I, indexed by bitmask:
// bit (k-1) set means index k is present.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <initializer_list>
#include <memory>
#include <utility>
#include <vector>

#include "calib/errors.hpp"

namespace calib {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class InnerSpace {
public:
    InnerSpace(int dim, const Mat& metric, int orientation) : dim_(dim), orientation_(orientation) {
        if (dim < 1 || dim > 8) throw dimension_error("InnerSpace: dim must be in 1..8");
        if (orientation != 1 && orientation != -1)
            throw dimension_error("InnerSpace: orientation must be +1 or -1");
        if (metric.rows() != dim || metric.cols() != dim)
            throw dimension_error("InnerSpace: metric has wrong shape");
        if ((metric - metric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + metric.cwiseAbs().maxCoeff()))
            throw domain_error("InnerSpace: metric is not symmetric");
        Eigen::SelfAdjointEigenSolver<Mat> es(metric);
        if (es.eigenvalues().minCoeff() <= 0.0) throw domain_error("InnerSpace: metric is not positive definite");
        metric_ = metric;
        ginv_ = metric.inverse();
        sqrt_det_ = std::sqrt(metric.determinant());
        diagonal_ = (metric - Mat(metric.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
        build_induced();
    }

    static std::shared_ptr<const InnerSpace> make(int dim, int orientation = 1) {
        return std::make_shared<const InnerSpace>(dim, Mat::Identity(dim, dim), orientation);
    }
    static std::shared_ptr<const InnerSpace> make(const Mat& metric, int orientation = 1) {
        return std::make_shared<const InnerSpace>(static_cast<int>(metric.rows()), metric, orientation);
    }

    int dim() const { return dim_; }
    int orientation() const { return orientation_; }
    unsigned size() const { return 1u << dim_; }
    const Mat& metric() const { return metric_; }
    const Mat& metric_inverse() const { return ginv_; }
    double sqrt_det() const { return sqrt_det_; }
    bool diagonal() const { return diagonal_; }

    // <e^I, e^J> = det(G^{-1}[I, J]) for |I| = |J|, zero otherwise.
    double induced(unsigned I, unsigned J) const { return induced_(I, J); }

    bool same_as(const InnerSpace& o) const {
        return this == &o || (dim_ == o.dim_ && orientation_ == o.orientation_ && metric_ == o.metric_);
    }

private:
    void build_induced() {
        const unsigned n = size();
        induced_ = Mat::Zero(n, n);
        for (unsigned I = 0; I < n; ++I) {
            for (unsigned J = 0; J < n; ++J) {
                if (std::popcount(I) != std::popcount(J)) continue;
                const int k = std::popcount(I);
                if (k == 0) {
                    induced_(I, J) = 1.0;
                    continue;
                }
                if (diagonal_) {
                    if (I != J) continue;
                    double p = 1.0;
                    for (int a = 0; a < dim_; ++a)
                        if (I >> a & 1u) p *= ginv_(a, a);
                    induced_(I, J) = p;
                    continue;
                }
                Mat sub(k, k);
                int r = 0;
                for (int a = 0; a < dim_; ++a) {
                    if (!(I >> a & 1u)) continue;
                    int c = 0;
                    for (int b = 0; b < dim_; ++b) {
                        if (!(J >> b & 1u)) continue;
                        sub(r, c++) = ginv_(a, b);
                    }
                    ++r;
                }
                induced_(I, J) = sub.determinant();
            }
        }
    }

    int dim_;
    int orientation_;
    Mat metric_, ginv_, induced_;
    double sqrt_det_ = 1.0;
    bool diagonal_ = true;
};

using SpacePtr = std::shared_ptr<const InnerSpace>;

// Sign of e^I ^ e^J relative to e^{I u J}; zero when I and J overlap.
inline int wedge_sign(unsigned I, unsigned J) {
    if (I & J) return 0;
    int inversions = 0;
    for (unsigned rest = J; rest; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        inversions += std::popcount(I >> (j + 1));
    }
    return (inversions & 1) ? -1 : 1;
}

class Multivector {
public:
    Multivector() = default;
    explicit Multivector(SpacePtr space) : space_(std::move(space)), c_(Vec::Zero(space_->size())) {}
    Multivector(SpacePtr space, Vec coeffs) : space_(std::move(space)), c_(std::move(coeffs)) {
        if (c_.size() != static_cast<Eigen::Index>(space_->size()))
            throw dimension_error("Multivector: coefficient vector has wrong length");
    }

    static Multivector scalar(SpacePtr space, double s) {
        Multivector m(std::move(space));
        m.c_[0] = s;
        return m;
    }

    // e^{i1} ^ e^{i2} ^ ... with 1-based indices, in the given order.
    static Multivector basis(SpacePtr space, std::initializer_list<int> idx) {
        Multivector m = scalar(space, 1.0);
        for (int i : idx) m = m.wedge_with(covector_basis(space, i));
        return m;
    }

    static Multivector covector_basis(SpacePtr space, int i) {
        if (i < 1 || i > space->dim()) throw dimension_error("Multivector: index out of range");
        Multivector m(std::move(space));
        m.c_[1u << (i - 1)] = 1.0;
        return m;
    }

    // Covector sum_k w_k e^k.
    static Multivector covector(SpacePtr space, const Vec& w) {
        if (w.size() != space->dim()) throw dimension_error("Multivector: covector has wrong length");
        Multivector m(std::move(space));
        for (int k = 0; k < w.size(); ++k) m.c_[1u << k] = w[k];
        return m;
    }

    const SpacePtr& space() const { return space_; }
    const Vec& coeffs() const { return c_; }
    double operator[](unsigned I) const { return c_[I]; }
    double& operator[](unsigned I) { return c_[I]; }

    // Coefficient of e^{i1...ik} for increasing 1-based indices.
    double coeff(std::initializer_list<int> idx) const {
        unsigned I = 0;
        for (int i : idx) I |= 1u << (i - 1);
        return c_[I];
    }

    // -1 when the element is zero or mixed.
    int grade(double tol = 0.0) const {
        int g = -1;
        for (unsigned I = 0; I < c_.size(); ++I) {
            if (std::abs(c_[I]) <= tol) continue;
            const int k = std::popcount(I);
            if (g == -1) g = k;
            else if (g != k) return -1;
        }
        return g;
    }

    bool is_zero(double tol = 0.0) const { return c_.cwiseAbs().maxCoeff() <= tol; }

    Multivector graded_part(int k) const {
        Multivector m(space_);
        for (unsigned I = 0; I < c_.size(); ++I)
            if (std::popcount(I) == k) m.c_[I] = c_[I];
        return m;
    }

    Vec covector_coeffs() const {
        Vec w(space_->dim());
        for (int k = 0; k < w.size(); ++k) w[k] = c_[1u << k];
        return w;
    }

    double coeff_norm() const { return c_.norm(); }

    Multivector operator+(const Multivector& o) const {
        check_same(o);
        return {space_, c_ + o.c_};
    }
    Multivector operator-(const Multivector& o) const {
        check_same(o);
        return {space_, c_ - o.c_};
    }
    Multivector operator-() const { return {space_, -c_}; }
    Multivector operator*(double s) const { return {space_, c_ * s}; }
    friend Multivector operator*(double s, const Multivector& m) { return m * s; }
    Multivector& operator+=(const Multivector& o) {
        check_same(o);
        c_ += o.c_;
        return *this;
    }

    Multivector wedge_with(const Multivector& o) const {
        check_same(o);
        Multivector r(space_);
        const unsigned n = space_->size();
        for (unsigned I = 0; I < n; ++I) {
            if (c_[I] == 0.0) continue;
            for (unsigned J = 0; J < n; ++J) {
                if (o.c_[J] == 0.0) continue;
                const int s = wedge_sign(I, J);
                if (s) r.c_[I | J] += s * c_[I] * o.c_[J];
            }
        }
        return r;
    }

    void check_same(const Multivector& o) const {
        if (!space_ || !o.space_ || !space_->same_as(*o.space_))
            throw dimension_error("Multivector: operands live over different spaces");
    }

private:
    SpacePtr space_;
    Vec c_;
};

inline Multivector wedge(const Multivector& a, const Multivector& b) { return a.wedge_with(b); }

// Contraction of a raw vector w into the first slot of a.
inline Multivector contract(const Vec& w, const Multivector& a) {
    const auto& sp = a.space();
    if (w.size() != sp->dim()) throw dimension_error("contract: vector has wrong length");
    Multivector r(sp);
    const unsigned n = sp->size();
    for (unsigned I = 0; I < n; ++I) {
        const double aI = a[I];
        if (aI == 0.0) continue;
        for (unsigned rest = I; rest; rest &= rest - 1) {
            const int i = std::countr_zero(rest);
            const int before = std::popcount(I & ((1u << i) - 1u));
            const double s = (before & 1) ? -1.0 : 1.0;
            r[I & ~(1u << i)] += s * w[i] * aI;
        }
    }
    return r;
}

// Covector to vector via the inverse metric.
inline Vec raise(const Multivector& v) {
    if (v.grade() > 1 || (v.grade() == 0 && !v.is_zero())) throw grade_error("raise: argument is not grade 1");
    return v.space()->metric_inverse() * v.covector_coeffs();
}

// Vector to covector via the metric.
inline Multivector flat(const SpacePtr& space, const Vec& w) { return Multivector::covector(space, space->metric() * w); }

// v ⌟ a for a covector v, raised with the metric.
inline Multivector interior(const Multivector& v, const Multivector& a) {
    v.check_same(a);
    const int g = v.grade();
    if (g != 1 && !(g == -1 && v.is_zero())) throw grade_error("interior: first argument must be grade 1");
    return contract(raise(v), a);
}

// a(w1, ..., wk): successive first-slot contractions, scalar part of the result.
inline double evaluate(const Multivector& a, const std::vector<Vec>& ws) {
    Multivector r = a;
    for (const auto& w : ws) r = contract(w, r);
    return r[0];
}

inline double form_inner(const Multivector& a, const Multivector& b) {
    a.check_same(b);
    const int ga = a.grade(), gb = b.grade();
    if (ga >= 0 && gb >= 0 && ga != gb) throw grade_error("form_inner: grade mismatch");
    const auto& sp = *a.space();
    const unsigned n = sp.size();
    double s = 0.0;
    for (unsigned I = 0; I < n; ++I) {
        if (a[I] == 0.0) continue;
        if (sp.diagonal()) {
            s += a[I] * b[I] * sp.induced(I, I);
            continue;
        }
        for (unsigned J = 0; J < n; ++J)
            if (b[J] != 0.0) s += a[I] * b[J] * sp.induced(I, J);
    }
    return s;
}

// *e^I = o sqrt(det g) sum_K <e^I, e^K> eps(K, K^c) e^{K^c}.
inline Multivector hodge(const Multivector& a) {
    const auto& sp = *a.space();
    const unsigned n = sp.size(), full = n - 1;
    Multivector r(a.space());
    const double pre = sp.orientation() * sp.sqrt_det();
    for (unsigned I = 0; I < n; ++I) {
        if (a[I] == 0.0) continue;
        for (unsigned K = 0; K < n; ++K) {
            const double g = sp.induced(I, K);
            if (g == 0.0) continue;
            r[full & ~K] += pre * a[I] * g * wedge_sign(K, full & ~K);
        }
    }
    return r;
}

inline Multivector volume_form(const SpacePtr& space) {
    Multivector m(space);
    m[space->size() - 1] = space->orientation() * space->sqrt_det();
    return m;
}

inline std::pair<Multivector, Multivector> asd_sd_split(const Multivector& a) {
    if (a.space()->dim() != 4) throw dimension_error("asd_sd_split: space must be 4-dimensional");
    const int g = a.grade();
    if (g != 2 && !(g == -1 && a.is_zero())) throw grade_error("asd_sd_split: argument must be a 2-form");
    const Multivector s = hodge(a);
    return {(a + s) * 0.5, (a - s) * 0.5};
}

// |w1 ^ ... ^ wk| = sqrt(det <wi, wj>) in the metric of the space.
inline double volume_norm(const Mat& metric, const std::vector<Vec>& ws) {
    const int k = static_cast<int>(ws.size());
    Mat g(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) g(i, j) = ws[i].dot(metric * ws[j]);
    const double d = g.determinant();
    return d > 0.0 ? std::sqrt(d) : 0.0;
}

}  // namespace calib
