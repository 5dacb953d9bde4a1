// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "zakotfs/error.hpp"

namespace zakotfs {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights at the odd-indexed Kronrod abscissae (kXgk[1], [3], [5], [7]).
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Piece {
    double a, b;
    cplx value;
    double error;
    double magnitude;  // Kronrod estimate of int |f|
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const ComplexIntegrand& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx kron = fc * kWgk[7];
    cplx gauss = fc * kWg[3];
    double mag = std::abs(fc) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        double dx = h * kXgk[j];
        const cplx lo = f(c - dx), hi = f(c + dx);
        cplx s = lo + hi;
        kron += kWgk[j] * s;
        mag += kWgk[j] * (std::abs(lo) + std::abs(hi));
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    return {a, b, kron * h, std::abs((kron - gauss) * h), mag * std::abs(h)};
}

}  // namespace

QuadratureResult integrate_adaptive(const ComplexIntegrand& f, std::span<const double> breaks,
                                    const QuadratureOptions& opts) {
    if (breaks.size() < 2) throw InvalidParameter("integration needs at least two limits");
    std::priority_queue<Piece> heap;
    QuadratureResult out;
    cplx total{};
    double err = 0.0, magnitude = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        Piece p = gk15(f, breaks[i], breaks[i + 1]);
        out.evaluations += 15;
        total += p.value;
        err += p.error;
        magnitude += p.magnitude;
        heap.push(p);
    }
    std::vector<Piece> frozen;
    int splits = 0;
    // Accuracy below the rounding level of int |f| is not attainable.
    auto target = [&] {
        return std::max({opts.abs_tol, opts.rel_tol * std::abs(total), 50.0 * kEps * magnitude});
    };
    while (!heap.empty() && err > target()) {
        if (splits >= opts.max_subdivisions) {
            std::ostringstream msg;
            msg << "adaptive quadrature did not converge: error estimate " << err << " for value "
                << std::abs(total);
            throw QuadratureFailure(err, msg.str());
        }
        Piece worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval cannot be split further in floating point; keep its estimate.
            frozen.push_back(worst);
            continue;
        }
        Piece left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        magnitude += left.magnitude + right.magnitude - worst.magnitude;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    // Re-sum to drop the drift of the running updates.
    total = {};
    err = 0.0;
    for (const auto& p : frozen) {
        total += p.value;
        err += p.error;
    }
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = err;
    return out;
}

QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b, const QuadratureOptions& opts) {
    if (a == b) return {};
    if (a > b) {
        auto r = integrate_adaptive(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    const double lim[2] = {a, b};
    return integrate_adaptive(f, std::span<const double>(lim, 2), opts);
}

NodeSet gauss_legendre(int n) {
    if (n < 1) throw InvalidParameter("Gauss-Legendre order must be positive");
    NodeSet ns;
    ns.x.resize(static_cast<std::size_t>(n));
    ns.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        ns.x[static_cast<std::size_t>(i)] = -x;
        ns.x[static_cast<std::size_t>(n - 1 - i)] = x;
        ns.w[static_cast<std::size_t>(i)] = w;
        ns.w[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) ns.x[static_cast<std::size_t>(n / 2)] = 0.0;
    return ns;
}

NodeSet composite_gauss_legendre(std::span<const double> edges, int points) {
    NodeSet base = gauss_legendre(points);
    NodeSet out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        if (!(b > a)) continue;
        double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (std::size_t j = 0; j < base.size(); ++j) {
            out.x.push_back(c + h * base.x[j]);
            out.w.push_back(h * base.w[j]);
        }
    }
    return out;
}

std::vector<double> panel_edges(double a, double b, double max_width, std::span<const double> extra) {
    if (!(b > a) || !(max_width > 0)) throw InvalidParameter("invalid panel range");
    auto n = static_cast<long>(std::ceil((b - a) / max_width - 1e-12));
    n = std::max(n, 1L);
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(n) + 1 + extra.size());
    for (long i = 0; i <= n; ++i) e.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n));
    e.back() = b;
    for (double x : extra)
        if (x > a && x < b) e.push_back(x);
    std::sort(e.begin(), e.end());
    const double tol = 1e-12 * (b - a);
    std::vector<double> u;
    for (double x : e)
        if (u.empty() || x - u.back() > tol) u.push_back(x);
    if (u.back() != b) u.back() = b;
    return u;
}

}  // namespace zakotfs
