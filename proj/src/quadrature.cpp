#include "ym/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace ym {

namespace {

// Gauss 7 / Kronrod 15 pair on [-1, 1]; positive abscissae only, the rule is
// symmetric. Column 2 holds the Gauss weight (zero for Kronrod-only nodes).
struct GkNode {
    double x, gauss_w, kronrod_w;
};

constexpr GkNode kGk15[8] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0,               0.204432940075298},
    {0.586087235467691, 0.0,               0.169004726639267},
    {0.864864423359769, 0.0,               0.104790010322250},
    {0.991455371120813, 0.0,               0.022935322010529},
};

struct Cell {
    double lo, hi;
    double value;
    double err;
    bool left_singular = false;
    bool right_singular = false;
    std::size_t seq = 0;

    // worst error first; ties broken by insertion order for determinism
    bool operator<(const Cell& o) const {
        if (err != o.err) return err < o.err;
        return seq > o.seq;
    }
};

struct GkOutcome {
    double value, err;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

GkOutcome gk15(const std::function<double(double)>& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    double samples[15];
    int ns = 0;
    auto sample = [&](double x) {
        // keep nodes strictly interior; ultra-thin cells can otherwise round
        // onto a singular endpoint
        if (x <= lo) x = std::nextafter(lo, hi);
        if (x >= hi) x = std::nextafter(hi, lo);
        const double v = f(x);
        if (std::isnan(v) || std::isinf(v))
            throw QuadratureError("integrand returned a non-finite value at x = " + fmt(x));
        samples[ns++] = v;
        return v;
    };

    const double f0 = sample(mid);
    double resg = kGk15[0].gauss_w * f0;
    double resk = kGk15[0].kronrod_w * f0;
    double resabs = kGk15[0].kronrod_w * std::abs(f0);
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kGk15[i].x;
        const double fa = sample(mid - dx);
        const double fb = sample(mid + dx);
        resg += kGk15[i].gauss_w * (fa + fb);
        resk += kGk15[i].kronrod_w * (fa + fb);
        resabs += kGk15[i].kronrod_w * (std::abs(fa) + std::abs(fb));
    }

    const double mean = 0.5 * resk;
    double resasc = kGk15[0].kronrod_w * std::abs(f0 - mean);
    {
        int idx = 1;
        for (int i = 1; i < 8; ++i) {
            resasc += kGk15[i].kronrod_w *
                      (std::abs(samples[idx] - mean) + std::abs(samples[idx + 1] - mean));
            idx += 2;
        }
    }

    const double value = resk * half;
    const double scaled_asc = resasc * half;
    double err = std::abs((resk - resg) * half);
    if (scaled_asc != 0.0 && err != 0.0)
        err = scaled_asc * std::min(1.0, std::pow(200.0 * err / scaled_asc, 1.5));
    const double eps_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs * std::abs(half);
    err = std::max(err, eps_floor);
    return {value, err};
}

bool near(double a, double b, double scale) {
    return std::abs(a - b) <= 1e-12 * scale;
}

}  // namespace

QuadratureResult adaptive_quadrature(const std::function<double(double)>& f,
                                     double lo, double hi, double tol,
                                     std::span<const double> singular_endpoints,
                                     std::size_t max_evaluations) {
    if (!(tol > 0.0)) throw std::invalid_argument("adaptive_quadrature: tol must be > 0");
    if (!(lo < hi)) {
        if (lo == hi) return {0.0, 0.0, 0, 0};
        throw std::invalid_argument("adaptive_quadrature: lo > hi");
    }

    const double span = hi - lo;

    // Pre-split at singular points; mark which cell boundaries touch one.
    std::vector<double> cuts;
    bool lo_singular = false, hi_singular = false;
    for (double p : singular_endpoints) {
        if (near(p, lo, span)) lo_singular = true;
        else if (near(p, hi, span)) hi_singular = true;
        else if (p > lo && p < hi) cuts.push_back(p);
    }
    std::sort(cuts.begin(), cuts.end());

    std::size_t evaluations = 0;
    std::size_t next_seq = 0;
    std::vector<Cell> heap;
    double total_value = 0.0;
    double total_err = 0.0;
    double done_value = 0.0;
    double done_err = 0.0;
    std::size_t subdivisions = 0;

    auto make_cell = [&](double a, double b, bool ls, bool rs) {
        GkOutcome o = gk15(f, a, b);
        evaluations += 15;
        Cell c{a, b, o.value, o.err, ls, rs, next_seq++};
        total_value += c.value;
        total_err += c.err;
        return c;
    };
    auto push_cell = [&](Cell c) {
        heap.push_back(c);
        std::push_heap(heap.begin(), heap.end());
    };

    {
        double a = lo;
        bool ls = lo_singular;
        for (double cut : cuts) {
            push_cell(make_cell(a, cut, ls, true));
            a = cut;
            ls = true;
        }
        push_cell(make_cell(a, hi, ls, hi_singular));
    }

    const double eps = std::numeric_limits<double>::epsilon();
    while (total_err > tol && !heap.empty()) {
        std::pop_heap(heap.begin(), heap.end());
        Cell worst = heap.back();
        heap.pop_back();

        const double width = worst.hi - worst.lo;
        const double min_width =
            4.0 * eps * std::max(std::abs(worst.lo), std::abs(worst.hi)) + 1e-300;
        if (width <= min_width) {
            // cannot be refined further; keep its contribution as-is
            done_value += worst.value;
            done_err += worst.err;
            total_value -= worst.value;
            total_err -= worst.err;
            continue;
        }
        if (evaluations + 30 > max_evaluations)
            throw QuadratureError("evaluation budget exhausted (error estimate " +
                                  fmt(total_err + done_err) + ", tol " + fmt(tol) + ")");

        total_value -= worst.value;
        total_err -= worst.err;

        double split;
        if (worst.left_singular && !worst.right_singular)
            split = worst.lo + 0.125 * width;
        else if (worst.right_singular && !worst.left_singular)
            split = worst.hi - 0.125 * width;
        else if (worst.left_singular && worst.right_singular)
            split = worst.lo + 0.125 * width;
        else
            split = worst.lo + 0.5 * width;

        push_cell(make_cell(worst.lo, split, worst.left_singular, false));
        push_cell(make_cell(split, worst.hi, false, worst.right_singular));
        ++subdivisions;
    }

    const double err = total_err + done_err;
    if (err > tol)
        throw QuadratureError("failed to reach tolerance " + fmt(tol) +
                              " (error estimate " + fmt(err) + ")");

    double value = done_value;
    for (const Cell& c : heap) value += c.value;
    return {value, err, subdivisions, evaluations};
}

}  // namespace ym
