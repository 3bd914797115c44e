#include "sunburst/theory.hpp"

#include <cmath>

namespace sunburst {

namespace {

LimitingRegime make_regime(FieldRegime kind, double gap, double kappa) {
    if (!(gap > 0) || !(kappa >= 0))
        throw std::invalid_argument("limiting regime: need gap > 0 and kappa >= 0");
    LimitingRegime r;
    r.kind = kind;
    r.gap = gap;
    r.omega = std::sqrt(gap * gap + 4.0 * kappa * kappa);
    return r;
}

}  // namespace

LimitingRegime weak_field_regime(double delta, double kappa) {
    return make_regime(FieldRegime::WeakField, delta, kappa);
}

LimitingRegime strong_field_regime(double h, double delta, double kappa) {
    return make_regime(FieldRegime::StrongField, 2.0 * h + delta, kappa);
}

std::pair<Complex, Complex> limiting_amplitudes(double t, double kappa,
                                                const LimitingRegime& regime) {
    const double half = 0.5 * regime.omega * t;
    const double c = std::cos(half), s = std::sin(half);
    const Complex a(c, regime.gap / regime.omega * s);
    const Complex b(0.0, -2.0 * kappa / regime.omega * s);
    return {a, b};
}

double limiting_entropy(double t, double kappa, const LimitingRegime& regime) {
    // |A|^2 + |B|^2 = 1, so the qubit purity is |A|^4 + |B|^4.
    const auto [a, b] = limiting_amplitudes(t, kappa, regime);
    const double pa = std::norm(a), pb = std::norm(b);
    return 1.0 - (pa * pa + pb * pb);
}

std::optional<double> t_star(double kappa, const LimitingRegime& regime) {
    const double num = 4.0 * kappa * kappa - regime.gap * regime.gap;
    if (num < 0) return std::nullopt;  // entropy never reaches 1/2
    // cos(wt/2) decreases from 1, so the + branch of the arccos argument is
    // the first crossing of |A|^2 = 1/2.
    const double arg = std::sqrt(num / (8.0 * kappa * kappa));
    return 2.0 / regime.omega * std::acos(arg);
}

std::optional<double> t_star(double kappa, double delta) {
    return t_star(kappa, weak_field_regime(delta, kappa));
}

double small_time_entropy(double t, double kappa, int n, CoherenceKind kind,
                          int L) {
    if (n < 1) throw std::invalid_argument("small_time_entropy: n must be >= 1");
    const double base = 0.25 * (1.0 - std::cos(4.0 * std::sqrt(double(n)) * kappa * t));
    if (kind == CoherenceKind::Incoherent) return base;
    if (L < 1)
        throw std::invalid_argument("small_time_entropy: maximally coherent case needs L");
    return base * (1.0 - std::ldexp(1.0, -L));
}

double small_time_validity(double kappa, int n) {
    return 0.3 / (kappa * std::sqrt(double(n)));
}

double lubkin_value(int n) {
    if (n < 0) throw std::invalid_argument("lubkin_value: n must be >= 0");
    return 1.0 - std::ldexp(1.0, -n);
}

double full_transition_curve(double t, double kappa, int n, double s2_inf) {
    if (!(s2_inf > 0.0) || !(s2_inf < 1.0))
        throw std::invalid_argument("full_transition_curve: need s2_inf in (0, 1)");
    const double rate = 2.0 * double(n) * kappa * kappa / s2_inf;
    return (1.0 - std::exp(-rate * t * t)) * s2_inf;
}

std::vector<double> transition_ode_residual(const RealVector& times,
                                            const RealVector& s2, double kappa,
                                            int n, double s2_inf) {
    const Index m = times.size();
    if (s2.size() != m)
        throw std::invalid_argument("transition_ode_residual: size mismatch");
    if (m < 100)
        throw std::invalid_argument("transition_ode_residual: grid too coarse "
                                    "(need at least 100 points)");
    const double dt = times[1] - times[0];
    if (!(dt > 0))
        throw std::invalid_argument("transition_ode_residual: grid not increasing");
    for (Index i = 0; i + 1 < m; ++i)
        if (std::abs((times[i + 1] - times[i]) - dt) > 1e-9 * dt)
            throw std::invalid_argument("transition_ode_residual: grid not uniform");

    const double slope_coeff = 4.0 * double(n) * kappa * kappa / s2_inf;
    std::vector<double> residuals;
    residuals.reserve(m - 4);
    for (Index i = 2; i + 2 < m; ++i) {
        // fourth-order central difference
        const double d =
            (s2[i - 2] - 8.0 * s2[i - 1] + 8.0 * s2[i + 1] - s2[i + 2]) / (12.0 * dt);
        residuals.push_back(d + slope_coeff * times[i] * (s2[i] - s2_inf));
    }
    return residuals;
}

}  // namespace sunburst
