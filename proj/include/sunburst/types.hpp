#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sunburst {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Matrix2 = Eigen::Matrix2cd;
using Index = Eigen::Index;

// A dense Hermitian operator on the composite Hilbert space. Builders
// guarantee hermiticity by construction; eigendecompose() re-checks it.
using HermitianOperator = Matrix;

/// Eigensolver failed or a numerical invariant was violated at runtime.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested problem size exceeds the configured dimension cap.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A degenerate subspace could not be resolved into parity eigenstates.
struct degeneracy_error : numeric_error {
    using numeric_error::numeric_error;
};

enum class Model { SunburstIsing, SunburstXXZ };

/// Full parameterization of a sunburst or XXZ-sunburst Hamiltonian.
/// Energies are in units of the hopping J (hbar = 1).
struct HamiltonianSpec {
    Model model = Model::SunburstIsing;
    int L = 9;           // ring sites
    int n = 3;           // external qubits
    int b = 3;           // ring spacing between consecutive qubits
    double J = 1.0;      // ring hopping
    double h_lo = 0.95;  // transverse field, or interval [h_lo, h_hi]
    double h_hi = 0.95;
    double delta = 1.0;  // qubit gap
    double kappa = 1.0;  // ring-qubit coupling
    double D = 0.0;      // XXZ field-disorder half-width
    std::uint64_t seed = 0;

    int total_sites() const { return L + n; }
    Index dim() const { return Index{1} << total_sites(); }
    bool field_disordered() const { return h_hi > h_lo; }

    /// Throws std::invalid_argument on inconsistent parameters and
    /// resource_error when L + n exceeds the site cap.
    void validate(int site_cap) const;
    void validate() const;
};

/// Maximum L + n accepted by the builders. Defaults to 14 and can be
/// overridden with the SUNBURST_DIM_CAP environment variable.
int site_cap();

/// Tensor-slot assignment: which slots carry ring spins and which carry
/// qubits. Slot 0 is the most significant bit of a basis index, so the
/// standard layout (ring first) makes the ring index the row index of the
/// amplitude matrix reshape.
struct SiteLayout {
    std::vector<int> ring_sites;
    std::vector<int> qubit_sites;

    static SiteLayout standard(int L, int n);

    int total() const { return int(ring_sites.size() + qubit_sites.size()); }
    Index dim() const { return Index{1} << total(); }
    bool is_standard() const;
    bool valid() const;  // slots form a permutation of 0..total-1
};

inline std::string to_string(Model m) {
    return m == Model::SunburstIsing ? "SunburstIsing" : "SunburstXXZ";
}

}  // namespace sunburst
