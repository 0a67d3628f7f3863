#ifndef TAILPCA_THEORY_HPP
#define TAILPCA_THEORY_HPP

namespace tailpca {

/// Limit ratio c of dimension over extreme count. Positive, finite, and
/// never exactly 1 (that case is excluded from the theory).
class AspectRatio {
public:
    explicit AspectRatio(double c);

    double value() const { return c_; }
    double sqrt_c() const { return sqrt_c_; }
    /// Lower edge (1 - sqrt(c))^2 of the continuous bulk support.
    double support_lower() const;
    /// Upper edge (1 + sqrt(c))^2 of the continuous bulk support.
    double support_upper() const;

private:
    double c_;
    double sqrt_c_;
};

/// Spike map x(1 + c/(x-1)); the large-sample image of a population spike x.
/// Requires x > 1.
double phi_c(double x, AspectRatio c);

/// Bulk density sqrt((upper-x)(x-lower)) / (2 pi x c) on the open support,
/// 0 elsewhere. The point mass at 0 (for c > 1) is reported separately.
double mp_density(double x, AspectRatio c);

/// Mass at 0: max(0, 1 - 1/c).
double mp_point_mass(AspectRatio c);

/// Distribution function of the bulk law: point mass plus adaptive
/// quadrature of the density. Non-decreasing; reaches 1 at the upper edge.
double mp_cdf(double x, AspectRatio c);

/// Generalized inverse of mp_cdf by bisection to 1e-8 in x. Requires
/// alpha strictly between the point mass and 1.
double mp_quantile(double alpha, AspectRatio c);

/// True iff xi > 1 + sqrt(c). Requires xi >= 1.
bool distant_spike_check(double xi, AspectRatio c);

struct GapResult {
    double margin;
    bool satisfied;  ///< margin > 0
};

/// Margin of phi_c(xi) - 1 - log(phi_c(xi)) - 2c. Requires a distant spike.
GapResult gap_condition(double xi, AspectRatio c);

/// Margin of phi_c(xi)/c - 1 - log(phi_c(xi)/c) - 2/c. Requires a distant
/// spike and c > 1.
GapResult modified_gap_condition(double xi, AspectRatio c);

/// Predicted rescaled empirical eigenvalue for a population spike xi:
/// phi_c(xi) when distant, the bulk upper edge otherwise.
struct SpikeForecast {
    double xi;
    bool is_distant;
    double predicted_empirical;
};

SpikeForecast spike_forecast(double xi, AspectRatio c);

}  // namespace tailpca

#endif
