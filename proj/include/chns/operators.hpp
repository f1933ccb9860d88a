// Difference and averaging operators, inner products and norms on the MAC grid.
//
// All operators assume ghost-filled inputs and evaluate one uniform two- or
// four-point kernel over the full logical range of the output staggering; the
// boundary formulas (centered differences vanishing on Neumann walls, one-sided
// long stencils under homogeneous Dirichlet) then hold automatically through
// the ghost conventions of field.hpp.
//
// Inner-product index ranges:
//   cell:  i,j in [0,n)                    <f,g>_c  = h^2 sum f g
//   ew:    i in [1,n],  j in [0,n)         <f,g>_ew
//   ns:    i in [0,n),  j in [1,n]         <f,g>_ns
//   node:  i,j in [1,n]
// With the no-penetration or wrap conventions these ranges count every
// independent edge value exactly once, which is what makes the summation-by-
// parts identities exact at round-off.

#pragma once

#include <algorithm>
#include <cmath>

#include "chns/field.hpp"

namespace chns {

// -----------------------------------------------------------------------------
// Two-point divided differences
// -----------------------------------------------------------------------------

/// (D^c_x f)_{i,j+1/2} = (f_{i+1/2,j+1/2} - f_{i-1/2,j+1/2}) / h
inline EdgeFieldX diff_center_x(const CellField& f) {
    const int n = f.n();
    const double ih = 1.0 / f.h();
    EdgeFieldX r(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i) r(i, j) = (f(i, j) - f(i - 1, j)) * ih;
    return r;
}

/// (D^c_y f)_{i+1/2,j} = (f_{i+1/2,j+1/2} - f_{i+1/2,j-1/2}) / h
inline EdgeFieldY diff_center_y(const CellField& f) {
    const int n = f.n();
    const double ih = 1.0 / f.h();
    EdgeFieldY r(n);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) r(i, j) = (f(i, j) - f(i, j - 1)) * ih;
    return r;
}

/// (D^ew_x f)_{i+1/2,j+1/2} = (f_{i+1,j+1/2} - f_{i,j+1/2}) / h
inline CellField diff_ew_x(const EdgeFieldX& f) {
    const int n = f.n();
    const double ih = 1.0 / f.h();
    CellField r(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) r(i, j) = (f(i + 1, j) - f(i, j)) * ih;
    return r;
}

/// (D^ew_y f)_{i,j} = (f_{i,j+1/2} - f_{i,j-1/2}) / h, corner-valued
inline NodeField diff_ew_y(const EdgeFieldX& f) {
    const int n = f.n();
    const double ih = 1.0 / f.h();
    NodeField r(n);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) r(i, j) = (f(i, j) - f(i, j - 1)) * ih;
    return r;
}

/// (D^ns_x f)_{i,j} = (f_{i+1/2,j} - f_{i-1/2,j}) / h, corner-valued
inline NodeField diff_ns_x(const EdgeFieldY& f) {
    const int n = f.n();
    const double ih = 1.0 / f.h();
    NodeField r(n);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) r(i, j) = (f(i, j) - f(i - 1, j)) * ih;
    return r;
}

/// (D^ns_y f)_{i+1/2,j+1/2} = (f_{i+1/2,j+1} - f_{i+1/2,j}) / h
inline CellField diff_ns_y(const EdgeFieldY& f) {
    const int n = f.n();
    const double ih = 1.0 / f.h();
    CellField r(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) r(i, j) = (f(i, j + 1) - f(i, j)) * ih;
    return r;
}

// -----------------------------------------------------------------------------
// Long-stencil differences (f_{.+1} - f_{.-1}) / 2h, same staggering as input
// -----------------------------------------------------------------------------

inline EdgeFieldX diff_long_x(const EdgeFieldX& f) {
    const int n = f.n();
    const double c = 0.5 / f.h();
    EdgeFieldX r(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i) r(i, j) = (f(i + 1, j) - f(i - 1, j)) * c;
    return r;
}

inline EdgeFieldX diff_long_y(const EdgeFieldX& f) {
    const int n = f.n();
    const double c = 0.5 / f.h();
    EdgeFieldX r(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i) r(i, j) = (f(i, j + 1) - f(i, j - 1)) * c;
    return r;
}

inline EdgeFieldY diff_long_x(const EdgeFieldY& f) {
    const int n = f.n();
    const double c = 0.5 / f.h();
    EdgeFieldY r(n);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) r(i, j) = (f(i + 1, j) - f(i - 1, j)) * c;
    return r;
}

inline EdgeFieldY diff_long_y(const EdgeFieldY& f) {
    const int n = f.n();
    const double c = 0.5 / f.h();
    EdgeFieldY r(n);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) r(i, j) = (f(i, j + 1) - f(i, j - 1)) * c;
    return r;
}

// -----------------------------------------------------------------------------
// Averaging operators
// -----------------------------------------------------------------------------

/// (A_x f)_{i,j+1/2} = (f_{i-1/2,j+1/2} + f_{i+1/2,j+1/2}) / 2
inline EdgeFieldX avg_x(const CellField& f) {
    const int n = f.n();
    EdgeFieldX r(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i) r(i, j) = 0.5 * (f(i - 1, j) + f(i, j));
    return r;
}

/// (A_y f)_{i+1/2,j} = (f_{i+1/2,j-1/2} + f_{i+1/2,j+1/2}) / 2
inline EdgeFieldY avg_y(const CellField& f) {
    const int n = f.n();
    EdgeFieldY r(n);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) r(i, j) = 0.5 * (f(i, j - 1) + f(i, j));
    return r;
}

/// 4-point average of an x-edge field onto north-south points,
/// (A_xy f)_{i+1/2,j}. Ghost columns i = -1 and i = n are produced as well,
/// so long x-stencils of products with this factor stay well defined.
inline EdgeFieldY avg_xy_x(const EdgeFieldX& f) {
    const int n = f.n();
    EdgeFieldY r(n);
    for (int j = 0; j <= n; ++j)
        for (int i = -1; i <= n; ++i)
            r(i, j) = 0.25 * (f(i, j - 1) + f(i, j) + f(i + 1, j - 1) + f(i + 1, j));
    return r;
}

/// 4-point average of a y-edge field onto east-west points, (A_xy f)_{i,j+1/2}.
/// Ghost rows j = -1 and j = n are produced as well.
inline EdgeFieldX avg_xy_y(const EdgeFieldY& f) {
    const int n = f.n();
    EdgeFieldX r(n);
    for (int j = -1; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            r(i, j) = 0.25 * (f(i - 1, j) + f(i, j) + f(i - 1, j + 1) + f(i, j + 1));
    return r;
}

// -----------------------------------------------------------------------------
// Composite first/second-order operators
// -----------------------------------------------------------------------------

/// grad_h f = (D^c_x f, D^c_y f)
inline MacVelocity grad_h(const CellField& f) {
    MacVelocity g;
    g.x = diff_center_x(f);
    g.y = diff_center_y(f);
    return g;
}

/// div_h u = D^ew_x u^x + D^ns_y u^y at cell centers
inline CellField div_h(const MacVelocity& u) {
    CellField r = diff_ew_x(u.x);
    const CellField dy = diff_ns_y(u.y);
    for (int j = 0; j < r.n(); ++j)
        for (int i = 0; i < r.n(); ++i) r(i, j) += dy(i, j);
    return r;
}

/// 5-point Laplacian; the ghost closure of the input decides the boundary rule.
inline CellField lap_h(const CellField& f) {
    const int n = f.n();
    const double ih2 = 1.0 / (f.h() * f.h());
    CellField r(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            r(i, j) = (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) - 4.0 * f(i, j)) * ih2;
    return r;
}

inline EdgeFieldX lap_h(const EdgeFieldX& f) {
    const int n = f.n();
    const double ih2 = 1.0 / (f.h() * f.h());
    EdgeFieldX r(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i)
            r(i, j) = (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) - 4.0 * f(i, j)) * ih2;
    return r;
}

inline EdgeFieldY lap_h(const EdgeFieldY& f) {
    const int n = f.n();
    const double ih2 = 1.0 / (f.h() * f.h());
    EdgeFieldY r(n);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i)
            r(i, j) = (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) - 4.0 * f(i, j)) * ih2;
    return r;
}

inline MacVelocity lap_h(const MacVelocity& u) {
    MacVelocity r;
    r.x = lap_h(u.x);
    r.y = lap_h(u.y);
    return r;
}

// -----------------------------------------------------------------------------
// Inner products, norms, means
// -----------------------------------------------------------------------------

inline double inner_c(const CellField& f, const CellField& g) {
    const int n = f.n();
    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) s += f(i, j) * g(i, j);
    return s * f.h() * f.h();
}

inline double inner_ew(const EdgeFieldX& f, const EdgeFieldX& g) {
    const int n = f.n();
    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 1; i <= n; ++i) s += f(i, j) * g(i, j);
    return s * f.h() * f.h();
}

inline double inner_ns(const EdgeFieldY& f, const EdgeFieldY& g) {
    const int n = f.n();
    double s = 0.0;
    for (int j = 1; j <= n; ++j)
        for (int i = 0; i < n; ++i) s += f(i, j) * g(i, j);
    return s * f.h() * f.h();
}

inline double inner_node(const NodeField& f, const NodeField& g) {
    const int n = f.n();
    double s = 0.0;
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) s += f(i, j) * g(i, j);
    return s * f.h() * f.h();
}

/// <u,v>_1 = <u^x,v^x>_ew + <u^y,v^y>_ns
inline double inner_vec(const MacVelocity& u, const MacVelocity& v) {
    return inner_ew(u.x, v.x) + inner_ns(u.y, v.y);
}

inline double norm_l2(const CellField& f) { return std::sqrt(inner_c(f, f)); }
inline double norm_l2(const EdgeFieldX& f) { return std::sqrt(inner_ew(f, f)); }
inline double norm_l2(const EdgeFieldY& f) { return std::sqrt(inner_ns(f, f)); }
inline double norm_l2(const NodeField& f) { return std::sqrt(inner_node(f, f)); }
inline double norm_l2(const MacVelocity& u) { return std::sqrt(inner_vec(u, u)); }

inline double norm_lp(const CellField& f, double p) {
    const int n = f.n();
    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) s += std::pow(std::abs(f(i, j)), p);
    return std::pow(s * f.h() * f.h(), 1.0 / p);
}

inline double norm_lp(const EdgeFieldX& f, double p) {
    const int n = f.n();
    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 1; i <= n; ++i) s += std::pow(std::abs(f(i, j)), p);
    return std::pow(s * f.h() * f.h(), 1.0 / p);
}

inline double norm_lp(const EdgeFieldY& f, double p) {
    const int n = f.n();
    double s = 0.0;
    for (int j = 1; j <= n; ++j)
        for (int i = 0; i < n; ++i) s += std::pow(std::abs(f(i, j)), p);
    return std::pow(s * f.h() * f.h(), 1.0 / p);
}

inline double norm_linf(const CellField& f) {
    const int n = f.n();
    double m = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m = std::max(m, std::abs(f(i, j)));
    return m;
}

inline double norm_linf(const EdgeFieldX& f) {
    const int n = f.n();
    double m = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 1; i <= n; ++i) m = std::max(m, std::abs(f(i, j)));
    return m;
}

inline double norm_linf(const EdgeFieldY& f) {
    const int n = f.n();
    double m = 0.0;
    for (int j = 1; j <= n; ++j)
        for (int i = 0; i < n; ++i) m = std::max(m, std::abs(f(i, j)));
    return m;
}

inline double norm_linf(const MacVelocity& u) {
    return std::max(norm_linf(u.x), norm_linf(u.y));
}

/// Discrete average in the paper's convention, <f,1>_c (no |Omega| division;
/// the two coincide on the unit square).
inline double mean_c(const CellField& f) {
    const int n = f.n();
    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) s += f(i, j);
    return s * f.h() * f.h();
}

/// Gradient pieces of an x-edge field: cell part D^ew_x, corner part D^ew_y.
struct EdgeGradX {
    CellField dx;
    NodeField dy;
};

/// Gradient pieces of a y-edge field: corner part D^ns_x, cell part D^ns_y.
struct EdgeGradY {
    NodeField dx;
    CellField dy;
};

inline EdgeGradX grad_h(const EdgeFieldX& f) { return {diff_ew_x(f), diff_ew_y(f)}; }
inline EdgeGradY grad_h(const EdgeFieldY& f) { return {diff_ns_x(f), diff_ns_y(f)}; }

/// || grad_h u ||_2 for a velocity pair, the norm appearing in summation-3.
inline double norm_grad_velocity(const MacVelocity& u) {
    const EdgeGradX gx = grad_h(u.x);
    const EdgeGradY gy = grad_h(u.y);
    const double s = inner_c(gx.dx, gx.dx) + inner_node(gx.dy, gx.dy) +
                     inner_node(gy.dx, gy.dx) + inner_c(gy.dy, gy.dy);
    return std::sqrt(s);
}

/// || grad_h f ||_2 for a cell field (edges carry the gradient).
inline double norm_grad_cell(const CellField& f) {
    const EdgeFieldX gx = diff_center_x(f);
    const EdgeFieldY gy = diff_center_y(f);
    return std::sqrt(inner_ew(gx, gx) + inner_ns(gy, gy));
}

} // namespace chns
