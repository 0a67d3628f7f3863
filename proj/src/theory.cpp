#include "tailpca/theory.hpp"

#include <algorithm>
#include <cmath>

#include "tailpca/error.hpp"

namespace tailpca {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kQuadTol = 1e-10;
constexpr double kQuantileTolX = 1e-8;

template <typename F>
double adaptive_simpson_step(const F& f, double a, double b, double fa, double fm, double fb,
                             double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Continuous bulk mass on [lower, x]. Substituting
// t = lower + (upper - lower) * sin(psi)^2 removes the square-root endpoint
// singularities and stays cancellation-free even when the lower edge is
// tiny (c close to 1):
// integral of f_c over [lower, x] =
//   (width^2 / (pi c)) * integral_0^{psi_x} sin^2 cos^2 / t(psi) dpsi.
double bulk_mass_below(double x, const AspectRatio& c) {
    const double lower = c.support_lower();
    const double upper = c.support_upper();
    if (x <= lower) return 0.0;
    if (x > upper) x = upper;
    const double width = upper - lower;
    const double psi_x = std::asin(std::sqrt(std::clamp((x - lower) / width, 0.0, 1.0)));
    const double scale = width * width / (kPi * c.value());
    const auto integrand = [&](double psi) {
        const double s = std::sin(psi);
        const double ct = std::cos(psi);
        return s * s * ct * ct / (lower + width * s * s);
    };
    return scale * adaptive_simpson(integrand, 0.0, psi_x, kQuadTol);
}

}  // namespace

AspectRatio::AspectRatio(double c) : c_(c), sqrt_c_(std::sqrt(c)) {
    if (!(c > 0.0) || !std::isfinite(c)) throw_numeric("aspect ratio c must be positive and finite");
    if (c == 1.0) throw_numeric("c = 1 excluded");
}

double AspectRatio::support_lower() const {
    const double r = 1.0 - sqrt_c_;
    return r * r;
}

double AspectRatio::support_upper() const {
    const double r = 1.0 + sqrt_c_;
    return r * r;
}

double phi_c(double x, AspectRatio c) {
    if (!(x > 1.0)) throw_numeric("phi_c undefined at or below 1");
    return x * (1.0 + c.value() / (x - 1.0));
}

double mp_density(double x, AspectRatio c) {
    const double lower = c.support_lower();
    const double upper = c.support_upper();
    if (x <= lower || x >= upper) return 0.0;
    return std::sqrt((upper - x) * (x - lower)) / (2.0 * kPi * x * c.value());
}

double mp_point_mass(AspectRatio c) {
    return c.value() > 1.0 ? 1.0 - 1.0 / c.value() : 0.0;
}

double mp_cdf(double x, AspectRatio c) {
    const double pm = mp_point_mass(c);
    if (x < 0.0) return 0.0;
    if (x >= c.support_upper()) return 1.0;
    return pm + bulk_mass_below(x, c);
}

double mp_quantile(double alpha, AspectRatio c) {
    const double pm = mp_point_mass(c);
    if (!(alpha > pm) || !(alpha < 1.0)) throw_numeric("quantile outside continuous range");
    double lo = c.support_lower();
    double hi = c.support_upper();
    while (hi - lo > kQuantileTolX) {
        const double mid = 0.5 * (lo + hi);
        if (mp_cdf(mid, c) < alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

bool distant_spike_check(double xi, AspectRatio c) {
    if (!(xi >= 1.0)) throw_numeric("spike must be at least 1");
    return xi > 1.0 + c.sqrt_c();
}

GapResult gap_condition(double xi, AspectRatio c) {
    if (!distant_spike_check(xi, c)) throw_numeric("not a distant spike");
    const double phi = phi_c(xi, c);
    const double margin = phi - 1.0 - std::log(phi) - 2.0 * c.value();
    return GapResult{margin, margin > 0.0};
}

GapResult modified_gap_condition(double xi, AspectRatio c) {
    if (c.value() <= 1.0) throw_numeric("modified gap applies to c > 1 only");
    if (!distant_spike_check(xi, c)) throw_numeric("not a distant spike");
    const double ratio = phi_c(xi, c) / c.value();
    const double margin = ratio - 1.0 - std::log(ratio) - 2.0 / c.value();
    return GapResult{margin, margin > 0.0};
}

SpikeForecast spike_forecast(double xi, AspectRatio c) {
    const bool distant = distant_spike_check(xi, c);
    const double predicted = distant ? phi_c(xi, c) : c.support_upper();
    return SpikeForecast{xi, distant, predicted};
}

}  // namespace tailpca
