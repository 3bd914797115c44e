#include "sunburst/operators.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

namespace sunburst {

namespace {

bool all_finite(const RealVector& v) { return v.allFinite(); }

// Slot 0 is the most significant bit.
inline int slot_shift(int site, int total) { return total - 1 - site; }

void check_ring_fields(const RealVector& fields, int L, const char* what) {
    if (fields.size() != L)
        throw std::invalid_argument(std::string(what) + ": expected " +
                                    std::to_string(L) + " per-site values, got " +
                                    std::to_string(fields.size()));
    if (!all_finite(fields))
        throw std::invalid_argument(std::string(what) + ": non-finite field value");
}

}  // namespace

int site_cap() {
    if (const char* env = std::getenv("SUNBURST_DIM_CAP")) {
        int cap = std::atoi(env);
        if (cap >= 1) return cap;
    }
    return 14;
}

void HamiltonianSpec::validate(int cap) const {
    if (L < 3)
        throw std::invalid_argument("ring size L must be >= 3 (the L = 2 periodic "
                                    "bond is double counted)");
    if (n < 1) throw std::invalid_argument("qubit count n must be >= 1");
    if (b < 1) throw std::invalid_argument("qubit spacing b must be >= 1");
    if (n * b > L)
        throw std::invalid_argument("qubit layout requires n*b <= L");
    if (!std::isfinite(J) || !std::isfinite(h_lo) || !std::isfinite(h_hi) ||
        !std::isfinite(delta) || !std::isfinite(kappa) || !std::isfinite(D))
        throw std::invalid_argument("all energies must be finite");
    if (kappa < 0) throw std::invalid_argument("coupling kappa must be >= 0");
    if (h_hi < h_lo) throw std::invalid_argument("field interval has h_hi < h_lo");
    if (D < 0) throw std::invalid_argument("disorder half-width D must be >= 0");
    if (L + n > cap)
        throw resource_error("L + n = " + std::to_string(L + n) +
                             " exceeds the dimension cap " + std::to_string(cap) +
                             " (set SUNBURST_DIM_CAP to raise it)");
}

void HamiltonianSpec::validate() const { validate(site_cap()); }

SiteLayout SiteLayout::standard(int L, int n) {
    SiteLayout layout;
    layout.ring_sites.resize(L);
    layout.qubit_sites.resize(n);
    for (int i = 0; i < L; ++i) layout.ring_sites[i] = i;
    for (int j = 0; j < n; ++j) layout.qubit_sites[j] = L + j;
    return layout;
}

bool SiteLayout::is_standard() const {
    const int L = int(ring_sites.size());
    for (int i = 0; i < L; ++i)
        if (ring_sites[i] != i) return false;
    for (size_t j = 0; j < qubit_sites.size(); ++j)
        if (qubit_sites[j] != L + int(j)) return false;
    return true;
}

bool SiteLayout::valid() const {
    std::vector<char> seen(total(), 0);
    for (int s : ring_sites) {
        if (s < 0 || s >= total() || seen[s]) return false;
        seen[s] = 1;
    }
    for (int s : qubit_sites) {
        if (s < 0 || s >= total() || seen[s]) return false;
        seen[s] = 1;
    }
    return true;
}

Matrix2 pauli_x() {
    Matrix2 m;
    m << 0, 1, 1, 0;
    return m;
}

Matrix2 pauli_y() {
    Matrix2 m;
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Matrix2 pauli_z() {
    Matrix2 m;
    m << 1, 0, 0, -1;
    return m;
}

Matrix2 pauli_id() { return Matrix2::Identity(); }

HermitianOperator kron_embed(const Matrix2& local_op, int site, int total_sites) {
    if (total_sites < 1 || total_sites > 26)
        throw resource_error("kron_embed: total_sites out of supported range");
    if (site < 0 || site >= total_sites)
        throw std::invalid_argument("kron_embed: site index out of range");

    const Index dim = Index{1} << total_sites;
    Matrix out = Matrix::Zero(dim, dim);
    const Index mask = Index{1} << slot_shift(site, total_sites);
    for (Index row = 0; row < dim; ++row) {
        const int rbit = (row & mask) ? 1 : 0;
        for (int cbit = 0; cbit < 2; ++cbit) {
            const Index col = cbit ? (row | mask) : (row & ~mask);
            out(row, col) += local_op(rbit, cbit);
        }
    }
    return out;
}

void add_one_site(Matrix& H, Complex coeff, const Matrix2& op, int site,
                  int total_sites) {
    const Index mask = Index{1} << slot_shift(site, total_sites);
    const Index dim = H.rows();
    for (Index row = 0; row < dim; ++row) {
        const int rbit = (row & mask) ? 1 : 0;
        for (int cbit = 0; cbit < 2; ++cbit) {
            const Complex v = op(rbit, cbit);
            if (v == Complex(0, 0)) continue;
            const Index col = cbit ? (row | mask) : (row & ~mask);
            H(row, col) += coeff * v;
        }
    }
}

void add_two_site(Matrix& H, Complex coeff, const Matrix2& op_a, int site_a,
                  const Matrix2& op_b, int site_b, int total_sites) {
    const Index mask_a = Index{1} << slot_shift(site_a, total_sites);
    const Index mask_b = Index{1} << slot_shift(site_b, total_sites);
    const Index dim = H.rows();
    for (Index row = 0; row < dim; ++row) {
        const int abit = (row & mask_a) ? 1 : 0;
        const int bbit = (row & mask_b) ? 1 : 0;
        for (int ca = 0; ca < 2; ++ca) {
            for (int cb = 0; cb < 2; ++cb) {
                const Complex v = op_a(abit, ca) * op_b(bbit, cb);
                if (v == Complex(0, 0)) continue;
                Index col = ca ? (row | mask_a) : (row & ~mask_a);
                col = cb ? (col | mask_b) : (col & ~mask_b);
                H(row, col) += coeff * v;
            }
        }
    }
}

HermitianOperator build_ising_ring(int L, double J, const RealVector& h_fields) {
    if (L < 3) throw std::invalid_argument("build_ising_ring: L must be >= 3");
    check_ring_fields(h_fields, L, "build_ising_ring");
    const Index dim = Index{1} << L;
    Matrix H = Matrix::Zero(dim, dim);
    const Matrix2 sx = pauli_x(), sz = pauli_z();
    for (int i = 0; i < L; ++i) {
        add_two_site(H, -J, sx, i, sx, (i + 1) % L, L);
        add_one_site(H, -h_fields[i], sz, i, L);
    }
    return H;
}

HermitianOperator build_xxz_ring(int L, const RealVector& w_fields) {
    if (L < 3) throw std::invalid_argument("build_xxz_ring: L must be >= 3");
    check_ring_fields(w_fields, L, "build_xxz_ring");
    const Index dim = Index{1} << L;
    Matrix H = Matrix::Zero(dim, dim);
    const Matrix2 sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
    for (int i = 0; i < L; ++i) {
        const int j = (i + 1) % L;
        add_two_site(H, 1.0, sx, i, sx, j, L);
        add_two_site(H, 1.0, sy, i, sy, j, L);
        add_two_site(H, 1.0, sz, i, sz, j, L);
        add_one_site(H, w_fields[i], sz, i, L);
    }
    return H;
}

HermitianOperator build_isolated_qubits(int n, double delta) {
    if (n < 1) throw std::invalid_argument("build_isolated_qubits: n must be >= 1");
    const Index dim = Index{1} << n;
    Matrix H = Matrix::Zero(dim, dim);
    const Matrix2 sz = pauli_z();
    for (int j = 0; j < n; ++j) add_one_site(H, -delta / 2.0, sz, j, n);
    return H;
}

namespace {

// Shared geometry: ring terms are written by `ring_terms`, then the qubit
// gaps and the sigma^x Sigma^x star couplings are added.
template <typename RingTerms>
Matrix assemble_sunburst(const HamiltonianSpec& spec, RingTerms&& ring_terms) {
    spec.validate();
    const int total = spec.total_sites();
    Matrix H = Matrix::Zero(spec.dim(), spec.dim());
    ring_terms(H, total);
    const Matrix2 sx = pauli_x(), sz = pauli_z();
    for (int j = 0; j < spec.n; ++j) {
        const int qubit_slot = spec.L + j;
        add_one_site(H, -spec.delta / 2.0, sz, qubit_slot, total);
        add_two_site(H, -spec.kappa, sx, j * spec.b, sx, qubit_slot, total);
    }
    return H;
}

}  // namespace

HermitianOperator build_sunburst(const HamiltonianSpec& spec,
                                 const RealVector& h_fields) {
    if (spec.model != Model::SunburstIsing)
        throw std::invalid_argument("build_sunburst: spec.model is not SunburstIsing");
    check_ring_fields(h_fields, spec.L, "build_sunburst");
    return assemble_sunburst(spec, [&](Matrix& H, int total) {
        const Matrix2 sx = pauli_x(), sz = pauli_z();
        for (int i = 0; i < spec.L; ++i) {
            add_two_site(H, -spec.J, sx, i, sx, (i + 1) % spec.L, total);
            add_one_site(H, -h_fields[i], sz, i, total);
        }
    });
}

HermitianOperator build_xxz_sunburst(const HamiltonianSpec& spec,
                                     const RealVector& w_fields) {
    if (spec.model != Model::SunburstXXZ)
        throw std::invalid_argument("build_xxz_sunburst: spec.model is not SunburstXXZ");
    check_ring_fields(w_fields, spec.L, "build_xxz_sunburst");
    return assemble_sunburst(spec, [&](Matrix& H, int total) {
        const Matrix2 sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
        for (int i = 0; i < spec.L; ++i) {
            const int j = (i + 1) % spec.L;
            add_two_site(H, 1.0, sx, i, sx, j, total);
            add_two_site(H, 1.0, sy, i, sy, j, total);
            add_two_site(H, 1.0, sz, i, sz, j, total);
            add_one_site(H, w_fields[i], sz, i, total);
        }
    });
}

HermitianOperator build_hamiltonian(const HamiltonianSpec& spec) {
    if (spec.model == Model::SunburstIsing) {
        if (spec.field_disordered())
            throw std::invalid_argument(
                "build_hamiltonian: disordered field interval requires an explicit "
                "realization; use draw_fields + build_sunburst");
        return build_sunburst(spec, RealVector::Constant(spec.L, spec.h_lo));
    }
    if (spec.D > 0)
        throw std::invalid_argument(
            "build_hamiltonian: XXZ disorder requires an explicit realization; "
            "use draw_fields + build_xxz_sunburst");
    return build_xxz_sunburst(spec, RealVector::Zero(spec.L));
}

RealVector draw_fields(const HamiltonianSpec& spec, RandomStream& stream) {
    RealVector fields(spec.L);
    if (spec.model == Model::SunburstIsing) {
        for (int i = 0; i < spec.L; ++i) fields[i] = stream.uniform(spec.h_lo, spec.h_hi);
    } else {
        for (int i = 0; i < spec.L; ++i) fields[i] = stream.uniform(-spec.D, spec.D);
    }
    return fields;
}

HermitianOperator build_parity(int L, int n) {
    const int total = L + n;
    if (total < 1 || total > 26)
        throw resource_error("build_parity: L + n out of supported range");
    const Index dim = Index{1} << total;
    Matrix P = Matrix::Zero(dim, dim);
    for (Index a = 0; a < dim; ++a)
        P(a, a) = (std::popcount(std::uint64_t(a)) & 1) ? -1.0 : 1.0;
    return P;
}

RealVector parity_diagonal(int L, int n) {
    const Index dim = Index{1} << (L + n);
    RealVector d(dim);
    for (Index a = 0; a < dim; ++a)
        d[a] = (std::popcount(std::uint64_t(a)) & 1) ? -1.0 : 1.0;
    return d;
}

double hermiticity_residual(const Matrix& H) {
    return (H - H.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace sunburst
