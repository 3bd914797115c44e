#pragma once

#include "sunburst/types.hpp"

#include <optional>
#include <utility>

namespace sunburst {

enum class ParitySector { Plus = +1, Minus = -1, Unresolved = 0 };

/// Full eigendecomposition of a Hermitian operator. Eigenvalues ascend;
/// column k of `eigenvectors` belongs to eigenvalues[k]. When the operator
/// was purely real the real orthogonal eigenvector matrix is kept alongside
/// for faster propagation.
struct Spectrum {
    RealVector eigenvalues;
    Matrix eigenvectors;
    std::optional<RealMatrix> real_eigenvectors;
    ParitySector sector = ParitySector::Unresolved;

    Index dim() const { return eigenvalues.size(); }
    double spectral_scale() const {
        return dim() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    }
};

/// Throws std::invalid_argument unless max|H - H^dagger| <= 1e-12, and
/// numeric_error if the solver fails or sampled residuals |H v - E v|
/// exceed 1e-9 * max|E|. Column phases are fixed (largest entry real
/// positive) so results are deterministic up to degenerate subspaces.
Spectrum eigendecompose(const HermitianOperator& H);

/// Eigenvalues only, ascending; same hermiticity checks as eigendecompose.
RealVector eigenvalues_only(const HermitianOperator& H);

/// Splits a spectrum into P = +1 and P = -1 sectors. Eigenvectors with
/// |<v|P|v>| <= 0.99 are re-rotated inside their degenerate group into
/// parity eigenstates; if any vector still fails the threshold a
/// degeneracy_error is thrown. Requires [H, P] = 0 within tolerance.
std::pair<Spectrum, Spectrum> parity_sectors(const Spectrum& spectrum,
                                             const HermitianOperator& P);

/// Basis indices with the given diagonal-parity sign; `diag` is the
/// computational-basis diagonal of P.
std::vector<Index> sector_indices(const RealVector& diag, ParitySector sector);

/// Ratio statistics of nearest-neighbour spacings. Exact zero spacings
/// contribute r = 0 and are counted separately.
struct RatioStatistics {
    std::vector<double> ratios;  // each in [0, 1]
    double mean = 0.0;
    int zero_spacings = 0;
};

/// r_n = min(s_n, s_{n-1}) / max(s_n, s_{n-1}) over consecutive spacings of
/// an ascending eigenvalue list; needs at least 3 levels.
RatioStatistics spacing_ratios(const RealVector& eigenvalues_ascending);

struct SweepOptions {
    ParitySector sector = ParitySector::Plus;
    double trim_fraction = 0.10;  // drop this fraction of levels at each edge
    int threads = 0;              // 0 = hardware concurrency
};

struct SweepRow {
    double kappa = 0.0;
    double mean_r = 0.0;
    double stderr_mean = 0.0;
    int realizations = 0;
    ParitySector sector = ParitySector::Plus;
};

/// Disorder-averaged <r> per coupling value. Per realization the Hamiltonian
/// is built from a counter-derived field draw, restricted to one parity
/// sector, and its trimmed spacing ratios averaged; rows then average over
/// realizations. Deterministic for a fixed spec.seed regardless of thread
/// count.
std::vector<SweepRow> rratio_sweep(const HamiltonianSpec& spec_template,
                                   const std::vector<double>& kappa_grid,
                                   int realizations,
                                   const SweepOptions& options = {});

/// Eigenbasis of H_ring (x) 1 + 1 (x) H_qubits from the factor spectra:
/// eigenvalues are all pairwise sums, eigenvectors the Kronecker products,
/// sorted ascending.
Spectrum product_spectrum(const Spectrum& ring, const Spectrum& qubits);

/// Full-matrix validation used by tests: residual, orthonormality and
/// reconstruction error of a spectrum against its operator.
struct SpectrumResiduals {
    double eigen_residual;    // max |H v_k - E_k v_k|
    double orthonormality;    // max |V^dagger V - I|
    double reconstruction;    // max |V diag(E) V^dagger - H|
};
SpectrumResiduals validate_spectrum(const HermitianOperator& H, const Spectrum& s);

}  // namespace sunburst
