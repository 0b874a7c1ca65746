#include "shorake/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace shorake {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half;
// symmetric about zero). Even-indexed Kronrod nodes carry the Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    int depth;
};

struct SegmentWorse {
    bool operator()(const Segment& lhs, const Segment& rhs) const {
        return lhs.error < rhs.error;
    }
};

Segment evaluate_segment(const std::function<double(double)>& f, double a, double b,
                         int depth) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kronrod = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * kXgk[i];
        const double f1 = f(center - dx);
        const double f2 = (i == 7) ? 0.0 : f(center + dx);
        const double fsum = (i == 7) ? f1 : f1 + f2;
        kronrod += kWgk[i] * fsum;
        if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    const double diff = std::abs(kronrod - gauss);
    // Scaled error heuristic; tightens the raw |K - G| bound when the rule
    // is already close, as in QUADPACK.
    double err = diff;
    if (diff > 0.0) {
        const double scaled = std::pow(200.0 * diff / std::max(std::abs(kronrod), 1e-300), 1.5);
        if (scaled < 1.0) err = diff * scaled;
    }
    return Segment{a, b, kronrod, err, depth};
}

}  // namespace

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSettings& settings,
                              const std::vector<double>& breaks) {
    if (!(b > a)) return {0.0, 0.0};

    std::vector<double> edges{a};
    for (double x : breaks)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> queue;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Segment s = evaluate_segment(f, edges[i], edges[i + 1], 0);
        total += s.value;
        total_err += s.error;
        queue.push(s);
    }

    auto tolerance = [&] { return std::max(settings.abs_tol, settings.rel_tol * std::abs(total)); };

    while (total_err > tolerance()) {
        Segment worst = queue.top();
        if (worst.depth >= settings.max_depth)
            throw NonConvergenceError("1-D quadrature did not reach tolerance", total, total_err);
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = evaluate_segment(f, worst.a, mid, worst.depth + 1);
        Segment right = evaluate_segment(f, mid, worst.b, worst.depth + 1);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    return {total, total_err};
}

QuadratureResult quadrature_2d(const std::function<double(double, double)>& f,
                               const QuadRegion& region, const QuadratureSettings& settings,
                               const std::function<std::vector<double>(double)>& inner_breaks,
                               const std::vector<double>& outer_breaks) {
    if (!(region.y_max > 0.0)) return {0.0, 0.0};

    QuadratureSettings inner = settings;
    inner.rel_tol = settings.rel_tol * 0.1;
    inner.abs_tol = settings.abs_tol / std::max(region.y_max, 1.0) * 0.1;

    double worst_inner = 0.0;
    auto outer_integrand = [&](double y) {
        const double hi = region.upper(y);
        if (!(hi > 0.0)) return 0.0;
        std::vector<double> splits;
        if (inner_breaks) splits = inner_breaks(y);
        QuadratureResult r = integrate_1d([&](double w) { return f(y, w); }, 0.0, hi, inner, splits);
        worst_inner = std::max(worst_inner, r.error_estimate);
        return r.value;
    };

    QuadratureResult outer = integrate_1d(outer_integrand, 0.0, region.y_max, settings, outer_breaks);
    outer.error_estimate += worst_inner * region.y_max;
    return outer;
}

}  // namespace shorake
