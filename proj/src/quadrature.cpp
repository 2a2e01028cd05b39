#include "gksl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace gksl::quad {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre

const GaussRule& gauss_legendre(int n) {
    static std::mutex mtx;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int k = 0; k < m; ++k) {
        double x = std::cos(kPi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and P'_n(x)
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[k] = -x;
        rule.weights[k] = w;
        rule.nodes[n - 1 - k] = x;
        rule.weights[n - 1 - k] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return cache.emplace(n, std::move(rule)).first->second;
}

// ---------------------------------------------------------------------------
// Adaptive 1D

namespace {

struct Interval1D {
    double a, b;
    std::complex<double> val;
    double err;
    std::size_t id;
};

struct Cmp1D {
    bool operator()(const Interval1D& l, const Interval1D& r) const {
        if (l.err != r.err) return l.err < r.err;
        return l.id > r.id;
    }
};

Interval1D eval_interval(const std::function<std::complex<double>(double)>& f,
                         double a, double b, std::size_t id) {
    const GaussRule& lo = gauss_legendre(15);
    const GaussRule& hi = gauss_legendre(31);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::complex<double> q_lo = 0.0, q_hi = 0.0;
    for (int i = 0; i < 15; ++i) q_lo += lo.weights[i] * f(mid + half * lo.nodes[i]);
    for (int i = 0; i < 31; ++i) q_hi += hi.weights[i] * f(mid + half * hi.nodes[i]);
    q_lo *= half;
    q_hi *= half;
    if (std::isnan(q_hi.real()) || std::isnan(q_hi.imag()))
        throw std::runtime_error("integrate_1d: integrand returned NaN in [" +
                                 std::to_string(a) + ", " + std::to_string(b) + "]");
    return {a, b, q_hi, std::abs(q_hi - q_lo), id};
}

}  // namespace

LoopValue integrate_1d(const std::function<std::complex<double>(double)>& f,
                       double a, double b, double tol_rel, std::size_t max_intervals) {
    if (!(tol_rel > 0.0)) throw std::invalid_argument("integrate_1d: tol must be positive");
    std::size_t next_id = 0;
    std::priority_queue<Interval1D, std::vector<Interval1D>, Cmp1D> heap;
    heap.push(eval_interval(f, a, b, next_id++));
    std::complex<double> total = heap.top().val;
    double total_err = heap.top().err;

    while (total_err > std::max(tol_rel * std::abs(total), 1e-300) &&
           heap.size() < max_intervals) {
        Interval1D worst = heap.top();
        heap.pop();
        total -= worst.val;
        total_err -= worst.err;
        const double mid = 0.5 * (worst.a + worst.b);
        for (const auto& child : {eval_interval(f, worst.a, mid, next_id++),
                                  eval_interval(f, mid, worst.b, next_id++)}) {
            total += child.val;
            total_err += child.err;
            heap.push(child);
        }
    }
    const bool converged = total_err <= std::max(tol_rel * std::abs(total), 1e-300);
    return {total, total_err, converged};
}

// ---------------------------------------------------------------------------
// Grundmann-Moller simplex rules

SimplexRegion SimplexRegion::standard() {
    SimplexRegion r;
    r.vertices = {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
    return r;
}

double SimplexRegion::volume() const {
    // determinant of edge vectors in the (z1, z2, z3) embedding, / 3!
    double e[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e[i][j] = vertices[i + 1][j] - vertices[0][j];
    const double det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
                       e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
                       e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
    return std::abs(det) / 6.0;
}

std::pair<SimplexRegion, SimplexRegion> SimplexRegion::split_longest_edge() const {
    int best_i = 0, best_j = 1;
    double best = -1.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            double len2 = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double d = vertices[i][k] - vertices[j][k];
                len2 += d * d;
            }
            if (len2 > best) {
                best = len2;
                best_i = i;
                best_j = j;
            }
        }
    }
    std::array<double, 4> mid;
    for (int k = 0; k < 4; ++k) mid[k] = 0.5 * (vertices[best_i][k] + vertices[best_j][k]);
    SimplexRegion a = *this, b = *this;
    a.vertices[best_j] = mid;
    b.vertices[best_i] = mid;
    return {a, b};
}

namespace {

// Grundmann-Moller rule of degree 2s+1 on the standard 3-simplex: one weight
// per lattice level, points (2*beta + 1)/(2s + 4 - 2i) with |beta| = s - i.
// Level weights are solved from the monomial moments int z1^k = k!/(k+3)!.
struct GMRule {
    std::vector<std::array<double, 4>> points;  // barycentric
    std::vector<double> weights;                // per point
};

GMRule build_gm_rule(int s) {
    const int d = 3;
    std::vector<std::vector<std::array<double, 4>>> levels(s + 1);
    for (int i = 0; i <= s; ++i) {
        const int rem = s - i;
        const double denom = 2.0 * s + d + 1.0 - 2.0 * i;
        for (int b0 = 0; b0 <= rem; ++b0)
            for (int b1 = 0; b1 + b0 <= rem; ++b1)
                for (int b2 = 0; b2 + b1 + b0 <= rem; ++b2) {
                    const int b3 = rem - b0 - b1 - b2;
                    levels[i].push_back({(2.0 * b0 + 1.0) / denom, (2.0 * b1 + 1.0) / denom,
                                         (2.0 * b2 + 1.0) / denom, (2.0 * b3 + 1.0) / denom});
                }
    }
    // Solve for level weights using even monomial moments z1^(2r); odd powers
    // are degenerate with the point counts on symmetric point sets.
    // int_simplex z1^k dz = k!/(k+3)!
    const int n = s + 1;
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int r = 0; r < n; ++r) {
        const int k = 2 * r;
        for (int i = 0; i < n; ++i)
            for (const auto& p : levels[i]) a[r][i] += std::pow(p[0], k);
        double moment = 1.0;
        for (int j = k + 1; j <= k + 3; ++j) moment /= j;
        a[r][n] = moment;
    }
    for (int col = 0; col < n; ++col) {  // Gaussian elimination, partial pivoting
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        if (a[col][col] == 0.0) throw std::runtime_error("simplex rule: singular weight system");
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double fct = a[r][col] / a[col][col];
            for (int c = col; c <= n; ++c) a[r][c] -= fct * a[col][c];
        }
    }
    GMRule rule;
    for (int i = 0; i < n; ++i) {
        const double w = a[i][n] / a[i][i];
        for (const auto& p : levels[i]) {
            rule.points.push_back(p);
            rule.weights.push_back(w);
        }
    }
    return rule;
}

const GMRule& gm_rule_low() {
    static const GMRule r = build_gm_rule(2);  // degree 5, 15 points
    return r;
}
const GMRule& gm_rule_high() {
    static const GMRule r = build_gm_rule(3);  // degree 7, 35 points
    return r;
}

struct SimplexCell {
    SimplexRegion geo;
    std::complex<double> val;
    double err;
    std::size_t id;
};

struct CmpCell {
    bool operator()(const SimplexCell& l, const SimplexCell& r) const {
        if (l.err != r.err) return l.err < r.err;
        return l.id > r.id;
    }
};

SimplexCell eval_cell(const SimplexBatchFn& f, const SimplexRegion& geo, std::size_t id) {
    const GMRule& lo = gm_rule_low();
    const GMRule& hi = gm_rule_high();
    const std::size_t n_lo = lo.points.size(), n_hi = hi.points.size();
    const std::size_t n = n_lo + n_hi;
    std::array<double, 64> z1{}, z2{}, z3{};
    std::array<std::complex<double>, 64> vals{};
    auto map_point = [&](const std::array<double, 4>& bary, std::size_t slot) {
        double g[4] = {0, 0, 0, 0};
        for (int v = 0; v < 4; ++v)
            for (int c = 0; c < 4; ++c) g[c] += bary[v] * geo.vertices[v][c];
        z1[slot] = g[0];
        z2[slot] = g[1];
        z3[slot] = g[2];
    };
    for (std::size_t i = 0; i < n_lo; ++i) map_point(lo.points[i], i);
    for (std::size_t i = 0; i < n_hi; ++i) map_point(hi.points[i], n_lo + i);
    f(z1.data(), z2.data(), z3.data(), n, vals.data());
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(vals[i].real()) || std::isnan(vals[i].imag())) {
            std::ostringstream os;
            os << "integrate_simplex: integrand returned NaN at z = (" << z1[i] << ", " << z2[i]
               << ", " << z3[i] << ", " << 1.0 - z1[i] - z2[i] - z3[i] << ")";
            throw std::runtime_error(os.str());
        }
    }
    const double scale = geo.volume() / (1.0 / 6.0);
    std::complex<double> q_lo = 0.0, q_hi = 0.0;
    for (std::size_t i = 0; i < n_lo; ++i) q_lo += lo.weights[i] * vals[i];
    for (std::size_t i = 0; i < n_hi; ++i) q_hi += hi.weights[i] * vals[n_lo + i];
    q_lo *= scale;
    q_hi *= scale;
    return {geo, q_hi, std::abs(q_hi - q_lo), id};
}

}  // namespace

LoopValue integrate_simplex(const SimplexBatchFn& f, const SimplexOptions& opt) {
    if (!(opt.tol_rel > 0.0)) throw std::invalid_argument("integrate_simplex: tol must be positive");
    std::size_t next_id = 0;
    std::priority_queue<SimplexCell, std::vector<SimplexCell>, CmpCell> heap;
    heap.push(eval_cell(f, SimplexRegion::standard(), next_id++));
    std::complex<double> total = heap.top().val;
    double total_err = heap.top().err;

    while (total_err > std::max(opt.tol_rel * std::abs(total), 1e-300) &&
           heap.size() < opt.max_regions) {
        SimplexCell worst = heap.top();
        heap.pop();
        total -= worst.val;
        total_err -= worst.err;
        auto [ga, gb] = worst.geo.split_longest_edge();
        for (const auto& child : {eval_cell(f, ga, next_id++), eval_cell(f, gb, next_id++)}) {
            total += child.val;
            total_err += child.err;
            heap.push(child);
        }
    }
    const bool converged = total_err <= std::max(opt.tol_rel * std::abs(total), 1e-300);
    return {total, total_err, converged};
}

LoopValue integrate_simplex(const SimplexBatchFn& f, double tol_rel) {
    SimplexOptions opt;
    opt.tol_rel = tol_rel;
    return integrate_simplex(f, opt);
}

LoopValue integrate_simplex_fn(
    const std::function<std::complex<double>(double, double, double, double)>& f,
    double tol_rel) {
    SimplexBatchFn batch = [&f](const double* z1, const double* z2, const double* z3,
                                std::size_t n, std::complex<double>* out) {
        for (std::size_t i = 0; i < n; ++i) {
            double z4 = 1.0 - z1[i] - z2[i] - z3[i];
            if (z4 < 0.0 && z4 >= -1e-14) z4 = 0.0;
            out[i] = f(z1[i], z2[i], z3[i], z4);
        }
    };
    return integrate_simplex(batch, tol_rel);
}

// ---------------------------------------------------------------------------
// Adaptive 2D rectangles

namespace {

struct RectCell {
    double x0, x1, y0, y1;
    std::complex<double> val;
    double err;
    std::size_t id;
};

struct CmpRect {
    bool operator()(const RectCell& l, const RectCell& r) const {
        if (l.err != r.err) return l.err < r.err;
        return l.id > r.id;
    }
};

RectCell eval_rect(const Rect2DBatchFn& f, double x0, double x1, double y0, double y1,
                   std::size_t id) {
    const GaussRule& lo = gauss_legendre(4);
    const GaussRule& hi = gauss_legendre(8);
    const double xm = 0.5 * (x0 + x1), xh = 0.5 * (x1 - x0);
    const double ym = 0.5 * (y0 + y1), yh = 0.5 * (y1 - y0);
    std::array<double, 80> xs{}, ys{};
    std::array<std::complex<double>, 80> vals{};
    std::size_t k = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            xs[k] = xm + xh * lo.nodes[i];
            ys[k] = ym + yh * lo.nodes[j];
            ++k;
        }
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            xs[k] = xm + xh * hi.nodes[i];
            ys[k] = ym + yh * hi.nodes[j];
            ++k;
        }
    f(xs.data(), ys.data(), k, vals.data());
    std::complex<double> q_lo = 0.0, q_hi = 0.0;
    k = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) q_lo += lo.weights[i] * lo.weights[j] * vals[k++];
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) q_hi += hi.weights[i] * hi.weights[j] * vals[k++];
    const double scale = xh * yh;
    q_lo *= scale;
    q_hi *= scale;
    if (std::isnan(q_hi.real()) || std::isnan(q_hi.imag()))
        throw std::runtime_error("integrate_rect2d: integrand returned NaN");
    return {x0, x1, y0, y1, q_hi, std::abs(q_hi - q_lo), id};
}

}  // namespace

LoopValue integrate_rect2d(const Rect2DBatchFn& f, double x0, double x1, double y0, double y1,
                           const Rect2DOptions& opt) {
    std::size_t next_id = 0;
    std::priority_queue<RectCell, std::vector<RectCell>, CmpRect> heap;
    heap.push(eval_rect(f, x0, x1, y0, y1, next_id++));
    std::complex<double> total = heap.top().val;
    double total_err = heap.top().err;

    while (total_err > std::max(opt.tol_rel * std::abs(total), 1e-300) &&
           heap.size() < opt.max_regions) {
        RectCell worst = heap.top();
        heap.pop();
        total -= worst.val;
        total_err -= worst.err;
        RectCell children[2];
        if (worst.x1 - worst.x0 >= worst.y1 - worst.y0) {
            const double xm = 0.5 * (worst.x0 + worst.x1);
            children[0] = eval_rect(f, worst.x0, xm, worst.y0, worst.y1, next_id++);
            children[1] = eval_rect(f, xm, worst.x1, worst.y0, worst.y1, next_id++);
        } else {
            const double ym = 0.5 * (worst.y0 + worst.y1);
            children[0] = eval_rect(f, worst.x0, worst.x1, worst.y0, ym, next_id++);
            children[1] = eval_rect(f, worst.x0, worst.x1, ym, worst.y1, next_id++);
        }
        for (const auto& child : children) {
            total += child.val;
            total_err += child.err;
            heap.push(child);
        }
    }
    const bool converged = total_err <= std::max(opt.tol_rel * std::abs(total), 1e-300);
    return {total, total_err, converged};
}

// ---------------------------------------------------------------------------
// eps -> 0 extrapolation

namespace {

// Neville evaluation of the interpolating polynomial at 0 through (x_i, y_i),
// using the first k points.
double neville_at_zero(std::span<const double> x, std::span<const double> y, std::size_t k) {
    std::vector<double> p(y.begin(), y.begin() + k);
    for (std::size_t level = 1; level < k; ++level)
        for (std::size_t i = 0; i + level < k; ++i)
            p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
    return p[0];
}

struct Extrapolated {
    double value;
    double residual;   // last Neville correction
    bool monotone;     // corrections non-increasing at the tail
    std::vector<double> coeffs;  // extrapolant = sum coeffs[i] * y[i]
};

Extrapolated extrapolate_component(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    Extrapolated out;
    out.value = neville_at_zero(x, y, n);
    std::vector<double> seq(n);
    for (std::size_t k = 1; k <= n; ++k) seq[k - 1] = neville_at_zero(x, y, k);
    const double corr_last = std::abs(seq[n - 1] - seq[n - 2]);
    const double corr_prev = n >= 3 ? std::abs(seq[n - 2] - seq[n - 3]) : corr_last;
    out.residual = corr_last;
    out.monotone = corr_last <= corr_prev || corr_last == 0.0;
    out.coeffs.assign(n, 0.0);
    std::vector<double> basis(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(basis.begin(), basis.end(), 0.0);
        basis[j] = 1.0;
        out.coeffs[j] = neville_at_zero(x, basis, n);
    }
    return out;
}

}  // namespace

LoopValue extrapolate_eps(const std::function<LoopValue(double)>& g,
                          std::span<const double> schedule,
                          const ExtrapolationOptions& opt) {
    const std::size_t n = schedule.size();
    if (n < 3) throw std::invalid_argument("extrapolate_eps: schedule needs >= 3 entries");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(schedule[i] > 0.0))
            throw std::invalid_argument("extrapolate_eps: schedule entries must be positive");
        if (i > 0 && !(schedule[i] < schedule[i - 1]))
            throw std::invalid_argument("extrapolate_eps: schedule must be strictly decreasing");
    }

    std::vector<LoopValue> samples(n);
    for (std::size_t i = 0; i < n; ++i) samples[i] = g(schedule[i]);

    std::vector<double> x_im(schedule.begin(), schedule.end());
    std::vector<double> x_re(n);
    for (std::size_t i = 0; i < n; ++i)
        x_re[i] = opt.even_real ? schedule[i] * schedule[i] : schedule[i];

    std::vector<double> y_re(n), y_im(n);
    for (std::size_t i = 0; i < n; ++i) {
        y_re[i] = samples[i].value.real();
        y_im[i] = samples[i].value.imag();
    }
    const Extrapolated re = extrapolate_component(x_re, y_re);
    const Extrapolated im = extrapolate_component(x_im, y_im);

    double prop_re = 0.0, prop_im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        prop_re += std::abs(re.coeffs[i]) * samples[i].abs_error;
        prop_im += std::abs(im.coeffs[i]) * samples[i].abs_error;
    }
    const double err_re = re.residual + prop_re;
    const double err_im = im.residual + prop_im;

    bool inputs_ok = true;
    for (const auto& sm : samples) inputs_ok = inputs_ok && sm.converged;
    const bool mono_ok = (re.monotone || re.residual <= 2.0 * prop_re + 1e-300) &&
                         (im.monotone || im.residual <= 2.0 * prop_im + 1e-300);

    LoopValue out;
    out.value = {re.value, im.value};
    out.abs_error = std::hypot(err_re, err_im);
    out.converged = inputs_ok && mono_ok;
    return out;
}

}  // namespace gksl::quad
