#pragma once

#include "sunburst/types.hpp"

#include <optional>
#include <utility>

namespace sunburst {

// Closed-form results for the single-qubit quench in the two exactly
// solvable field limits. In both, the dynamics closes on a two-level
// subspace with Rabi frequency omega; `gap` is the unperturbed energy
// splitting of that pair (delta at weak field, 2h + delta at strong field).
enum class FieldRegime { WeakField, StrongField };

struct LimitingRegime {
    FieldRegime kind = FieldRegime::WeakField;
    double gap = 1.0;
    double omega = 1.0;
};

LimitingRegime weak_field_regime(double delta, double kappa);
LimitingRegime strong_field_regime(double h, double delta, double kappa);

/// Two-level amplitudes of the evolved state:
/// A(t) = cos(wt/2) + i (gap/w) sin(wt/2), B(t) = -i (2k/w) sin(wt/2).
std::pair<Complex, Complex> limiting_amplitudes(double t, double kappa,
                                                const LimitingRegime& regime);

/// Single-qubit linear entropy 1 - (|A|^4 + |B|^4); zero at t = 0 and
/// periodic with period 2*pi/omega.
double limiting_entropy(double t, double kappa, const LimitingRegime& regime);

/// Earliest time at which the limiting entropy reaches its ceiling 1/2,
/// (2/w) acos(sqrt((4k^2 - gap^2)/(8k^2))); no value when 2k < gap.
std::optional<double> t_star(double kappa, const LimitingRegime& regime);

/// Weak-field shorthand: gap = delta.
std::optional<double> t_star(double kappa, double delta);

enum class CoherenceKind { Incoherent, MaximallyCoherent };

/// Short-time entropy growth (1/4)(1 - cos(4 sqrt(n) k t)), scaled by
/// (1 - 2^-L) for a maximally coherent ring state. Expands to
/// 2 n k^2 t^2 (incoherent) at small t. Valid for t up to roughly
/// small_time_validity(kappa, n).
double small_time_entropy(double t, double kappa, int n, CoherenceKind kind,
                          int L = 0);

/// Declared validity window 0.3 / (kappa sqrt(n)) of the small-time law.
double small_time_validity(double kappa, int n);

/// Saturation entropy 1 - 2^-n of n qubits entangled with a large bath.
double lubkin_value(int n);

/// Complete entropy transition S2(t) = S2_inf (1 - exp(-2 n k^2 t^2 / S2_inf)).
double full_transition_curve(double t, double kappa, int n, double s2_inf);

/// Pointwise residuals of dS2/dt + (4 n k^2 t / S2_inf)(S2 - S2_inf) = 0 on
/// a uniform grid, via a fourth-order interior stencil. Returns one value
/// per interior point (indices 2 .. size-3); needs at least 100 points.
std::vector<double> transition_ode_residual(const RealVector& times,
                                            const RealVector& s2, double kappa,
                                            int n, double s2_inf);

}  // namespace sunburst
