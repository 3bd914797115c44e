#pragma once

#include "sunburst/random.hpp"
#include "sunburst/spectral.hpp"
#include "sunburst/types.hpp"

#include <optional>

namespace sunburst {

/// Normalized amplitude vector over the composite Hilbert space with a
/// declared ring/qubit bipartition.
struct QuantumState {
    Vector amplitudes;
    SiteLayout layout;

    Index dim() const { return amplitudes.size(); }
    double norm_deviation() const { return std::abs(amplitudes.norm() - 1.0); }
};

enum class Subsystem { Qubits, Ring };

struct ReducedDensityMatrix {
    Matrix entries;
    Subsystem subsystem = Subsystem::Qubits;
};

/// kron(a, b) with the first factor index major (matches SiteLayout::standard).
Vector kron_vector(const Vector& a, const Vector& b);

/// Amplitudes rearranged as a (ring x qubit) matrix according to the layout;
/// for the standard layout this is a plain reshape.
Matrix amplitude_matrix(const QuantumState& state);

/// Product of the ring ground state and the qubit ground state. A degenerate
/// ring ground level is resolved to its parity +1 combination; failure to
/// find exactly one such member raises degeneracy_error.
QuantumState ground_product_state(const Spectrum& ring, const Spectrum& qubits);

/// (1/sqrt(N)) sum_m exp(i phi_m) |m> (x) qubit_state over the N lowest ring
/// eigenstates. Phases come from `phases` (size N) or are drawn uniformly
/// from [0, 2 pi) off the supplied stream.
QuantumState maximally_coherent_state(const Spectrum& ring, int N,
                                      const std::vector<double>& phases,
                                      const Vector& qubit_state);
QuantumState maximally_coherent_state(const Spectrum& ring, int N,
                                      RandomStream& phase_stream,
                                      const Vector& qubit_state);

/// |psi(t)> = sum_k exp(-i E_k t) <k|psi(0)> |k> (hbar = 1).
QuantumState evolve(const QuantumState& state0, const Spectrum& post_quench,
                    double t);

ReducedDensityMatrix reduce_to_qubits(const QuantumState& state);
ReducedDensityMatrix reduce_to_ring(const QuantumState& state);

double purity(const ReducedDensityMatrix& rho);
double linear_entropy(const ReducedDensityMatrix& rho);

/// sum_k |<k|psi>|^4 in the given eigenbasis.
double ipr(const QuantumState& state, const Spectrum& basis);

/// Coherence c^2 = sum_{m != m'} |rho_{mm'}|^2 in the given eigenbasis.
double coherence_measure(const Matrix& rho, const Spectrum& basis);
double coherence_measure(const ReducedDensityMatrix& rho, const Spectrum& basis);

struct InitialStateRecipe {
    enum class Kind { GroundProduct, MaximallyCoherent };
    Kind kind = Kind::GroundProduct;
    int coherent_levels = 1;                    // N, MaximallyCoherent only
    std::optional<std::vector<double>> phases;  // explicit phases override
};

/// Pre- and post-quench spectra of one disorder realization, shared by all
/// quenches at these parameters. Fields are drawn from spec.seed when the
/// spec declares an interval.
struct QuenchSystem {
    HamiltonianSpec spec;
    RealVector fields;
    Spectrum ring;    // pre-quench ring factor
    Spectrum qubits;  // pre-quench qubit factor
    Spectrum full;    // post-quench composite
};

QuenchSystem prepare_quench_system(const HamiltonianSpec& spec);

/// Materializes the recipe against a prepared system. Coherent-state phases
/// not supplied explicitly are drawn from a stream derived from
/// (spec.seed, N), so every recipe is reproducible from the spec alone.
QuantumState initial_state(const QuenchSystem& system,
                           const InitialStateRecipe& recipe);

enum class AnalyticKind { None, Auto, LimitingCase, TransitionCurve };

struct QuenchOptions {
    bool record_ipr = false;  // IPR in the pre-quench product eigenbasis
    AnalyticKind analytic = AnalyticKind::Auto;
    int time_chunk = 256;
};

/// Time series of qubit observables along an exact quench evolution.
struct QuenchTrace {
    RealVector times;
    RealVector linear_entropy;
    RealVector purity;
    std::optional<RealVector> ipr;
    std::optional<RealVector> analytic;
};

/// Evolves the recipe state on the given time grid and records S_L, purity
/// and optionally IPR; attaches the matching closed-form curve when one
/// applies (exactly solvable field limit, or the full transition curve for a
/// maximally coherent state over the complete ring basis).
QuenchTrace run_quench(const QuenchSystem& system, const InitialStateRecipe& recipe,
                       const RealVector& times, const QuenchOptions& options = {});

/// Convenience: prepare_quench_system + run_quench.
QuenchTrace run_quench(const HamiltonianSpec& spec, const InitialStateRecipe& recipe,
                       const RealVector& times, const QuenchOptions& options = {});

/// Mean and population variance of S_L over t in [window_lo, window_hi].
std::pair<double, double> time_statistics(const QuenchTrace& trace,
                                          double window_lo, double window_hi);

double pearson_correlation(const RealVector& x, const RealVector& y);

}  // namespace sunburst
