#pragma once

#include "sunburst/random.hpp"
#include "sunburst/types.hpp"

namespace sunburst {

// Local Pauli operators (2x2).
Matrix2 pauli_x();
Matrix2 pauli_y();
Matrix2 pauli_z();
Matrix2 pauli_id();

/// I (x) ... (x) local_op (x) ... (x) I with local_op at tensor slot `site`.
/// Slot 0 is the most significant bit of a basis index.
HermitianOperator kron_embed(const Matrix2& local_op, int site, int total_sites);

/// Adds coeff * O_a(site_a) in place; O(dim) entries touched.
void add_one_site(Matrix& H, Complex coeff, const Matrix2& op, int site,
                  int total_sites);

/// Adds coeff * O_a(site_a) O_b(site_b) in place, site_a != site_b.
void add_two_site(Matrix& H, Complex coeff, const Matrix2& op_a, int site_a,
                  const Matrix2& op_b, int site_b, int total_sites);

// Subsystem Hamiltonians. Ring bonds are periodic; the L = 2 ring is
// rejected because its periodic bond would be double counted.
HermitianOperator build_ising_ring(int L, double J, const RealVector& h_fields);
HermitianOperator build_xxz_ring(int L, const RealVector& w_fields);
HermitianOperator build_isolated_qubits(int n, double delta);

/// Transverse-field Ising ring coupled to n external qubits through
/// sigma^x Sigma^x bonds; qubit j attaches to ring site j*b.
/// h_fields must have L entries.
HermitianOperator build_sunburst(const HamiltonianSpec& spec,
                                 const RealVector& h_fields);

/// Same geometry with the ring replaced by a disordered XXZ chain;
/// w_fields must have L entries in [-D, D].
HermitianOperator build_xxz_sunburst(const HamiltonianSpec& spec,
                                     const RealVector& w_fields);

/// Uniform-field convenience; requires h_lo == h_hi for the Ising model
/// and D == 0 for the XXZ model.
HermitianOperator build_hamiltonian(const HamiltonianSpec& spec);

/// Draws per-site fields for one disorder realization: h_i in [h_lo, h_hi]
/// for the Ising ring, W_i in [-D, D] for the XXZ ring.
RealVector draw_fields(const HamiltonianSpec& spec, RandomStream& stream);

/// Global spin-flip parity P = prod_i sigma_i^z (x) prod_j Sigma_j^z.
/// Diagonal with entries +-1; P^2 = I exactly.
HermitianOperator build_parity(int L, int n);

/// Diagonal of the parity operator, entry a = (-1)^popcount(a).
RealVector parity_diagonal(int L, int n);

/// max |H - H^dagger| entry.
double hermiticity_residual(const Matrix& H);

}  // namespace sunburst
