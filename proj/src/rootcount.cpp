#include "kostlan/rootcount.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "kostlan/evaluator.hpp"
#include "kostlan/exact.hpp"

namespace kostlan {

std::string_view to_string(RootMethod m) {
    return m == RootMethod::sturm_exact ? "sturm_exact" : "bracket_refine";
}

RootCountMismatch::RootCountMismatch(int bracket_count, int exact_count)
    : std::runtime_error("root count mismatch: bracketing found " + std::to_string(bracket_count) +
                         ", Sturm found " + std::to_string(exact_count)),
      bracket_count_(bracket_count),
      exact_count_(exact_count) {}

namespace {

constexpr int kMaxDepth = 40;
constexpr int kNewtonCap = 60;
constexpr double kSafety = 1.5;
constexpr double kLastBelowPi = 3.1415926535897927;  // nextafter(pi, 0)

double cot_of(double theta) {
    if (theta <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    if (theta >= kPi) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::cos(theta) / std::sin(theta);
}

// min over u in [0,1] of |H(u)| for the cubic Hermite interpolant with end
// values v0, v1 and end slopes (already multiplied by the cell width) s0, s1.
// Returns 0 when H changes sign.
double hermite_min_abs(double v0, double v1, double s0, double s1) {
    const double c3 = 2.0 * v0 + s0 - 2.0 * v1 + s1;
    const double c2 = -3.0 * v0 - 2.0 * s0 + 3.0 * v1 - s1;
    const double c1 = s0;
    const double c0 = v0;
    auto h = [&](double u) { return ((c3 * u + c2) * u + c1) * u + c0; };
    double lo = std::min(v0, v1);
    double hi = std::max(v0, v1);
    auto consider = [&](double u) {
        if (u > 0.0 && u < 1.0) {
            const double v = h(u);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    };
    const double qa = 3.0 * c3;
    const double qb = 2.0 * c2;
    const double qc = c1;
    if (qa == 0.0) {
        if (qb != 0.0) {
            consider(-qc / qb);
        }
    } else {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
            const double r = std::sqrt(disc);
            const double q = -0.5 * (qb + std::copysign(r, qb));
            consider(q / qa);
            if (q != 0.0) {
                consider(qc / q);
            }
        }
    }
    if (lo <= 0.0 && hi >= 0.0) {
        return 0.0;
    }
    return std::min(std::abs(lo), std::abs(hi));
}

struct Cell {
    double a, b;
    double fa, fb;
    double ga, gb;
};

struct Bracket {
    double a, b;
    double fa, fb;
};

struct ScanResult {
    std::vector<Bracket> brackets;
    std::vector<std::pair<double, double>> unresolved;
};

// Walks the grid and classifies each cell as root-free, single-root bracket,
// or unresolved. Every classification is certified by a Hermite bound on f
// (root-free) or on f' (monotone, hence one root) that accounts for the
// interpolation remainder and the evaluator's rounding bound.
class Scanner {
public:
    Scanner(const SampleEvaluator& ev) : ev_(ev) {}

    ScanResult run(int grid_factor) {
        const int d = ev_.degree();
        const std::size_t n = static_cast<std::size_t>(std::max(grid_factor * d, 16));
        const double h = kPi / static_cast<double>(n);
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = static_cast<double>(i) * h;
        }
        std::vector<double> f(n + 1);
        std::vector<double> g(n + 1);
        ev_.eval_grid(0, xs, f);
        ev_.eval_grid(1, xs, g);
        const double parity = (d & 1) ? -1.0 : 1.0;
        f[n] = parity * f[0];
        g[n] = parity * g[0];
        result_ = {};
        for (std::size_t i = 0; i < n; ++i) {
            const double b = i + 1 < n ? xs[i + 1] : kPi;
            process({xs[i], b, f[i], f[i + 1], g[i], g[i + 1]}, 0);
        }
        return std::move(result_);
    }

private:
    double remainder_bound(int order, double w) const {
        const double w2 = w * w;
        return w2 * w2 / 384.0 * ev_.coefficient_norm(order + 4) + ev_.rounding_bound(order) +
               0.25 * w * ev_.rounding_bound(order + 1);
    }

    bool monotone(const Cell& c) const {
        const double w = c.b - c.a;
        const double ka = ev_.eval(2, c.a);
        const double kb = ev_.eval(2, c.b);
        return hermite_min_abs(c.ga, c.gb, w * ka, w * kb) > kSafety * remainder_bound(1, w);
    }

    void process(const Cell& c, int depth) {
        const double w = c.b - c.a;
        if (c.fa == 0.0 || c.fb == 0.0) {
            result_.unresolved.emplace_back(c.a, c.b);
            return;
        }
        if ((c.fa < 0.0) != (c.fb < 0.0)) {
            if (monotone(c)) {
                result_.brackets.push_back({c.a, c.b, c.fa, c.fb});
                return;
            }
        } else if (hermite_min_abs(c.fa, c.fb, w * c.ga, w * c.gb) >
                   kSafety * remainder_bound(0, w)) {
            return;
        }
        const double m = c.a + 0.5 * w;
        if (depth >= kMaxDepth || !(c.a < m && m < c.b)) {
            result_.unresolved.emplace_back(c.a, c.b);
            return;
        }
        const double fm = ev_.eval(0, m);
        const double gm = ev_.eval(1, m);
        process({c.a, m, c.fa, fm, c.ga, gm}, depth + 1);
        process({m, c.b, fm, c.fb, gm, c.gb}, depth + 1);
    }

    const SampleEvaluator& ev_;
    ScanResult result_;
};

// Exact side: the polynomial p(t) = sum_k B_k t^k in t = cot(theta), with
// the root at infinity (theta = 0) tracked separately. A theta-cell [a, b)
// corresponds to the t-interval (cot b, cot a].
class ExactContext {
public:
    explicit ExactContext(const SampleEvaluator& ev) : ev_(ev) {}

    bool root_at_infinity() const { return ev_.root_at_infinity(); }

    const IntegerPolynomial& poly() {
        if (!poly_) {
            if (ev_.degree() > SampleEvaluator::kHornerMaxDegree) {
                throw std::invalid_argument("exact root counting supports degree <= " +
                                            std::to_string(SampleEvaluator::kHornerMaxDegree));
            }
            poly_ = IntegerPolynomial::from_dyadic(ev_.scaled_coefficients());
            if (poly_->is_zero()) {
                throw std::invalid_argument("root counting: zero polynomial");
            }
        }
        return *poly_;
    }

    const SturmSequence& sturm() {
        if (!seq_) {
            seq_.emplace(poly());
        }
        return *seq_;
    }

    // theta in (0, pi) maps onto the whole t line, so the finite roots are
    // the real roots of p; this skips building the full Sturm sequence.
    int total() { return (root_at_infinity() ? 1 : 0) + count_distinct_real_roots(poly()); }

    // Roots of p with theta in [a, b), excluding the root at infinity.
    int count_finite(double a, double b) {
        if (poly().degree() <= 0) {
            return 0;
        }
        const double t_hi = cot_of(a);
        const double t_lo = cot_of(b);
        if (t_lo == t_hi) {
            return 0;
        }
        if (t_lo > t_hi) {
            throw RootLocalizationError("cotangent not monotone at double resolution");
        }
        return sturm().count_roots(t_lo, t_hi);
    }

    int count_cell(double a, double b) {
        return ((a == 0.0 && root_at_infinity()) ? 1 : 0) + count_finite(a, b);
    }

    void isolate_cell(double a, double b, double tol, std::vector<double>& out) {
        if (a == 0.0 && root_at_infinity()) {
            out.push_back(0.0);
        }
        isolate(a, b, count_finite(a, b), tol, out);
    }

private:
    int sign_t(double t) {
        return std::isinf(t) ? poly().sign_at_infinity(t > 0) : poly().sign_at(t);
    }

    void isolate(double a, double b, int n, double tol, std::vector<double>& out) {
        if (n <= 0) {
            return;
        }
        if (n == 1) {
            const int sa = sign_t(cot_of(a));
            const int sb = sign_t(cot_of(b));
            if (sa != 0 && sb != 0 && sa != sb) {
                bisect_sign(a, b, sa, tol, out);
                return;
            }
        }
        const double m = a + 0.5 * (b - a);
        if (!(a < m && m < b)) {
            if (n == 1) {
                out.push_back(m);
                return;
            }
            throw RootLocalizationError("distinct roots closer than double resolution");
        }
        if (n == 1 && b - a <= tol) {
            out.push_back(m);
            return;
        }
        const int left = count_finite(a, m);
        if (left < 0 || left > n) {
            throw RootLocalizationError("inconsistent Sturm counts during isolation");
        }
        isolate(a, m, left, tol, out);
        isolate(m, b, n - left, tol, out);
    }

    // One simple root in [a, b) with exact signs sa at a and -sa at b.
    void bisect_sign(double a, double b, int sa, double tol, std::vector<double>& out) {
        while (b - a > tol) {
            const double m = a + 0.5 * (b - a);
            if (!(a < m && m < b)) {
                break;
            }
            const int sm = sign_t(cot_of(m));
            if (sm == 0) {
                out.push_back(m);
                return;
            }
            if (sm == sa) {
                a = m;
            } else {
                b = m;
            }
        }
        out.push_back(a + 0.5 * (b - a));
    }

    const SampleEvaluator& ev_;
    std::optional<IntegerPolynomial> poly_;
    std::optional<SturmSequence> seq_;
};

double polish(const SampleEvaluator& ev, const Bracket& br, double tol) {
    double a = br.a;
    double b = br.b;
    const bool neg_a = br.fa < 0.0;
    auto on_left = [&](double fx) { return (fx < 0.0) == neg_a; };
    double x = a + 0.5 * (b - a);
    int newton = 0;
    for (int it = 0; it < 1000 && b - a > tol; ++it) {
        const double fx = ev.eval(0, x);
        if (fx == 0.0) {
            return x;
        }
        if (on_left(fx)) {
            a = x;
        } else {
            b = x;
        }
        double next = a + 0.5 * (b - a);
        if (newton < kNewtonCap) {
            ++newton;
            const double gx = ev.eval(1, x);
            const double xn = gx != 0.0 ? x - fx / gx : next;
            if (xn > a && xn < b) {
                if (std::abs(xn - x) <= 0.25 * tol) {
                    // Converged: confirm by shrinking the bracket around xn.
                    const double lo = std::max(a, xn - 0.5 * tol);
                    const double hi = std::min(b, xn + 0.5 * tol);
                    const double flo = ev.eval(0, lo);
                    const double fhi = ev.eval(0, hi);
                    if (lo > a && on_left(flo)) {
                        a = lo;
                    }
                    if (hi < b && !on_left(fhi)) {
                        b = hi;
                    }
                }
                next = xn;
            }
        }
        if (!(next > a && next < b)) {
            next = a + 0.5 * (b - a);
        }
        x = next;
    }
    if (b - a <= tol) {
        x = a + 0.5 * (b - a);
    }
    return x;
}

bool wants_exact(const LocateOptions& opts, int degree) {
    switch (opts.exact_check) {
        case ExactCheck::always:
            return true;
        case ExactCheck::never:
            return false;
        case ExactCheck::automatic:
            return degree <= kAutoExactMaxDegree;
    }
    return false;
}

void require_nonzero(const KostlanSample& s) {
    for (double a : s.coeffs()) {
        if (a != 0.0) {
            return;
        }
    }
    throw std::invalid_argument("root counting: zero polynomial");
}

RootSet finish(int degree, std::vector<double> angles, RootMethod method) {
    std::sort(angles.begin(), angles.end());
    for (auto& x : angles) {
        x = std::clamp(x, 0.0, kLastBelowPi);
    }
    for (std::size_t i = 1; i < angles.size(); ++i) {
        if (!(angles[i - 1] < angles[i])) {
            throw RootLocalizationError("distinct roots closer than the requested tolerance");
        }
    }
    RootSet rs;
    rs.degree = degree;
    rs.count = static_cast<int>(angles.size());
    rs.angles = std::move(angles);
    rs.method = method;
    return rs;
}

RootSet run(const KostlanSample& s, std::optional<double> tol, const LocateOptions& opts) {
    require_nonzero(s);
    if (opts.grid_factor < 1 || opts.max_refinements < 0) {
        throw std::invalid_argument("locate options: grid_factor >= 1, max_refinements >= 0");
    }
    const SampleEvaluator ev(s);
    ExactContext exact(ev);
    const bool check = wants_exact(opts, s.degree());
    const int exact_count = check ? exact.total() : -1;

    Scanner scanner(ev);
    int factor = opts.grid_factor;
    int bracket_count = -1;
    for (int attempt = 0; attempt <= opts.max_refinements; ++attempt, factor *= 2) {
        ScanResult scan = scanner.run(factor);
        int count = static_cast<int>(scan.brackets.size());
        for (const auto& [a, b] : scan.unresolved) {
            count += exact.count_cell(a, b);
        }
        bracket_count = count;
        if (check && count != exact_count) {
            continue;
        }
        const RootMethod method =
            scan.unresolved.empty() ? RootMethod::bracket_refine : RootMethod::sturm_exact;
        if (!tol) {
            RootSet rs;
            rs.degree = s.degree();
            rs.count = count;
            rs.method = method;
            return rs;
        }
        std::vector<double> angles;
        angles.reserve(static_cast<std::size_t>(count));
        for (const auto& br : scan.brackets) {
            angles.push_back(polish(ev, br, *tol));
        }
        for (const auto& [a, b] : scan.unresolved) {
            exact.isolate_cell(a, b, *tol, angles);
        }
        return finish(s.degree(), std::move(angles), method);
    }
    // Bracketing never agreed with Sturm: fall back to exact isolation.
    try {
        if (!tol) {
            RootSet rs;
            rs.degree = s.degree();
            rs.count = exact_count;
            rs.method = RootMethod::sturm_exact;
            return rs;
        }
        std::vector<double> angles;
        exact.isolate_cell(0.0, kPi, *tol, angles);
        RootSet rs = finish(s.degree(), std::move(angles), RootMethod::sturm_exact);
        if (rs.count == exact_count) {
            return rs;
        }
    } catch (const RootLocalizationError&) {
    }
    throw RootCountMismatch(bracket_count, exact_count);
}

}  // namespace

RootSet count_roots_exact(const KostlanSample& s) {
    require_nonzero(s);
    const SampleEvaluator ev(s);
    ExactContext exact(ev);
    RootSet rs;
    rs.degree = s.degree();
    rs.count = exact.total();
    rs.method = RootMethod::sturm_exact;
    return rs;
}

RootSet isolate_roots_exact(const KostlanSample& s, double tol) {
    require_nonzero(s);
    if (!(tol > 0.0)) {
        throw std::invalid_argument("isolate_roots_exact: tol must be positive");
    }
    const SampleEvaluator ev(s);
    ExactContext exact(ev);
    std::vector<double> angles;
    exact.isolate_cell(0.0, kPi, tol, angles);
    return finish(s.degree(), std::move(angles), RootMethod::sturm_exact);
}

RootSet count_roots(const KostlanSample& s, const LocateOptions& opts) {
    return run(s, std::nullopt, opts);
}

RootSet locate_roots(const KostlanSample& s, double tol, const LocateOptions& opts) {
    if (!(tol > 1e-14 && tol < 1e-3)) {
        throw std::invalid_argument("locate_roots: tol must lie in (1e-14, 1e-3)");
    }
    return run(s, tol, opts);
}

int count_in_window(const RootSet& rs, double a, double b) {
    if (!(a >= 0.0 && a < b && b <= kPi)) {
        throw std::invalid_argument("count_in_window: need 0 <= a < b <= pi");
    }
    if (!rs.angles) {
        if (a == 0.0 && b == kPi) {
            return rs.count;
        }
        throw std::invalid_argument("count_in_window: root set carries no angles");
    }
    const auto& v = *rs.angles;
    const auto lo = std::lower_bound(v.begin(), v.end(), a);
    const auto hi = std::lower_bound(v.begin(), v.end(), b);
    return static_cast<int>(hi - lo);
}

}  // namespace kostlan
