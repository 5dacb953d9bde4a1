// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "zakotfs/grid.hpp"

namespace zakotfs {

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-15;
    int max_subdivisions = 4000;
};

struct QuadratureResult {
    cplx value{};
    double error = 0.0;
    long evaluations = 0;
};

using ComplexIntegrand = std::function<cplx(double)>;

// Globally adaptive 15-point Gauss-Kronrod rule with bisection of the worst
// interval. `breaks` are sorted points that are always interval edges; the
// first and last are the integration limits. Throws QuadratureFailure when
// the tolerance is not met within max_subdivisions.
QuadratureResult integrate_adaptive(const ComplexIntegrand& f, std::span<const double> breaks,
                                    const QuadratureOptions& opts = {});
QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b,
                                    const QuadratureOptions& opts = {});

// Fixed nodes and weights. Used where many integrals share one node set.
struct NodeSet {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const noexcept { return x.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1].
NodeSet gauss_legendre(int n);
// Composite rule: `points` Gauss-Legendre nodes in each panel between consecutive edges.
NodeSet composite_gauss_legendre(std::span<const double> edges, int points);
// Edges a, a+h, ..., b with h <= max_width, merged with the given extra breakpoints.
std::vector<double> panel_edges(double a, double b, double max_width,
                                std::span<const double> extra = {});

}  // namespace zakotfs
