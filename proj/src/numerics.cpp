#include "bubblelab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "bubblelab/errors.hpp"

namespace bubblelab::num {

void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                       std::vector<double> upper, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
}

namespace {
// One-sided slope estimate from a cubic through the four nearest knots.
double endpoint_slope(const std::vector<double>& x, const std::vector<double>& y, bool left) {
    const std::size_t n = x.size();
    std::array<double, 4> xs{}, ys{};
    for (int i = 0; i < 4; ++i) {
        const std::size_t j = left ? static_cast<std::size_t>(i) : n - 4 + static_cast<std::size_t>(i);
        xs[static_cast<std::size_t>(i)] = x[j];
        ys[static_cast<std::size_t>(i)] = y[j];
    }
    const double x0 = left ? xs[0] : xs[3];
    // derivative of the Lagrange interpolant at x0
    double d = 0.0;
    for (int i = 0; i < 4; ++i) {
        double term = 0.0;
        for (int k = 0; k < 4; ++k) {
            if (k == i) continue;
            double prod = 1.0;
            for (int m = 0; m < 4; ++m) {
                if (m == i || m == k) continue;
                prod *= (x0 - xs[static_cast<std::size_t>(m)]) /
                        (xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(m)]);
            }
            term += prod / (xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(k)]);
        }
        d += ys[static_cast<std::size_t>(i)] * term;
    }
    return d;
}
}  // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : CubicSpline(std::move(x), std::move(y), std::nullopt, std::nullopt) {}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y,
                         std::optional<double> slope_a, std::optional<double> slope_b)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 4) throw InvalidInputError("cubic spline needs at least 4 knots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw InvalidInputError("cubic spline knots must be strictly increasing");
    const double da = slope_a ? *slope_a : endpoint_slope(x_, y_, true);
    const double db = slope_b ? *slope_b : endpoint_slope(x_, y_, false);

    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    auto h = [&](std::size_t i) { return x_[i + 1] - x_[i]; };
    diag[0] = 2.0 * h(0);
    upper[0] = h(0);
    rhs[0] = 6.0 * ((y_[1] - y_[0]) / h(0) - da);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        lower[i] = h(i - 1);
        diag[i] = 2.0 * (h(i - 1) + h(i));
        upper[i] = h(i);
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h(i) - (y_[i] - y_[i - 1]) / h(i - 1));
    }
    lower[n - 1] = h(n - 2);
    diag[n - 1] = 2.0 * h(n - 2);
    rhs[n - 1] = 6.0 * (db - (y_[n - 1] - y_[n - 2]) / h(n - 2));
    m_ = rhs;
    solve_tridiagonal(lower, diag, upper, m_);
}

std::size_t CubicSpline::segment(double s) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), s);
    std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    if (i + 1 >= x_.size()) i = x_.size() - 2;
    return i;
}

double CubicSpline::eval(double s) const {
    const std::size_t i = segment(s);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - s) / h, b = (s - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double s) const {
    const std::size_t i = segment(s);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - s) / h, b = (s - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

double CubicSpline::deriv2(double s) const {
    const std::size_t i = segment(s);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - s) / h, b = (s - x_[i]) / h;
    return a * m_[i] + b * m_[i + 1];
}

std::vector<double> cumulative_simpson(const std::function<double(double)>& fn,
                                       double a, double b, int n) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    const double h = (b - a) / n;
    double fl = fn(a);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xl = a + i * h;
        const double fm = fn(xl + 0.5 * h);
        const double fr = fn(xl + h);
        acc += h / 6.0 * (fl + 4.0 * fm + fr);
        out[static_cast<std::size_t>(i) + 1] = acc;
        fl = fr;
    }
    return out;
}

double simpson_from_samples(const std::vector<double>& y, double h) {
    const std::size_t cells = y.size() - 1;
    if (cells == 0) return 0.0;
    if (cells == 1) return 0.5 * h * (y[0] + y[1]);
    double acc = 0.0;
    const std::size_t pair_end = (cells % 2 == 0) ? cells : cells - 3;
    for (std::size_t i = 0; i + 2 <= pair_end; i += 2)
        acc += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
    if (cells % 2 != 0) {
        const std::size_t i = cells - 3;
        acc += 3.0 * h / 8.0 * (y[i] + 3.0 * y[i + 1] + 3.0 * y[i + 2] + y[i + 3]);
    }
    return acc;
}

namespace {
// Cash-Karp tableau.
constexpr double kA[6] = {0.0, 1.0 / 5, 3.0 / 10, 3.0 / 5, 1.0, 7.0 / 8};
constexpr double kB[6][5] = {
    {0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0},
    {3.0 / 10, -9.0 / 10, 6.0 / 5, 0, 0},
    {-11.0 / 54, 5.0 / 2, -70.0 / 27, 35.0 / 27, 0},
    {1631.0 / 55296, 175.0 / 512, 575.0 / 13824, 44275.0 / 110592, 253.0 / 4096}};
constexpr double kC5[6] = {37.0 / 378, 0, 250.0 / 621, 125.0 / 594, 0, 512.0 / 1771};
constexpr double kC4[6] = {2825.0 / 27648, 0,           18575.0 / 48384,
                           13525.0 / 55296, 277.0 / 14336, 1.0 / 4};
}  // namespace

void integrate_rk45(const OdeRhs& rhs, int dim, std::vector<double>& y,
                    const std::vector<double>& checkpoints,
                    const std::function<void(int, const double*)>& on_checkpoint,
                    double rtol, double atol) {
    std::vector<double> k(static_cast<std::size_t>(6) * dim), ytmp(dim), y5(dim);
    double x = checkpoints.front();
    on_checkpoint(0, y.data());
    double h = (checkpoints.back() - checkpoints.front()) /
               std::max<std::size_t>(1, checkpoints.size() - 1);
    for (std::size_t ci = 1; ci < checkpoints.size(); ++ci) {
        const double target = checkpoints[ci];
        int guard = 0;
        while (x < target) {
            h = std::min(h, target - x);
            if (++guard > 200000)
                throw NumericalFailureError("rk45: step count limit exceeded");
            rhs(x, y.data(), k.data());
            for (int st = 1; st < 6; ++st) {
                for (int d = 0; d < dim; ++d) {
                    double acc = y[d];
                    for (int j = 0; j < st; ++j) acc += h * kB[st][j] * k[j * dim + d];
                    ytmp[static_cast<std::size_t>(d)] = acc;
                }
                rhs(x + kA[st] * h, ytmp.data(), k.data() + st * dim);
            }
            double errnorm = 0.0;
            for (int d = 0; d < dim; ++d) {
                double s5 = 0.0, s4 = 0.0;
                for (int j = 0; j < 6; ++j) {
                    s5 += kC5[j] * k[j * dim + d];
                    s4 += kC4[j] * k[j * dim + d];
                }
                y5[static_cast<std::size_t>(d)] = y[d] + h * s5;
                const double sc =
                    atol + rtol * std::max(std::abs(y[d]), std::abs(y5[static_cast<std::size_t>(d)]));
                errnorm = std::max(errnorm, std::abs(h * (s5 - s4)) / sc);
            }
            if (errnorm <= 1.0) {
                x += h;
                y = y5;
                const double grow = (errnorm > 1e-12) ? 0.9 * std::pow(errnorm, -0.2) : 5.0;
                h *= std::min(5.0, grow);
            } else {
                h *= std::max(0.1, 0.9 * std::pow(errnorm, -0.25));
                if (!(h > 1e-16 * std::max(1.0, std::abs(x))))
                    throw NumericalFailureError("rk45: step size collapsed");
            }
        }
        x = target;
        on_checkpoint(static_cast<int>(ci), y.data());
    }
}

double bisect_root(const std::function<double(double)>& fn, double a, double b,
                   double xtol, int max_iter) {
    double fa = fn(a), fb = fn(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0))
        throw NumericalFailureError("bisect_root: endpoints do not bracket a root");
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = fn(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double golden_max(const std::function<double(double)>& fn, double a, double b, double xtol) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = fn(d);
        }
    }
    return 0.5 * (a + b);
}

std::uint64_t Rng::next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::gauss() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
}

void parallel_for(int count, const std::function<void(int)>& fn) {
    int max_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BUBBLE_LAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) max_threads = static_cast<int>(v);
    }
    max_threads = std::max(1, std::min(max_threads, count));
    if (max_threads == 1 || count < 2) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(max_threads));
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(max_threads));
    for (int t = 0; t < max_threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (int i = t; i < count; i += max_threads) fn(i);
            } catch (...) {
                errs[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace bubblelab::num
