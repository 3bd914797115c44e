#include "sunburst/dynamics.hpp"

#include "sunburst/operators.hpp"
#include "sunburst/theory.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace sunburst {

namespace {

int log2_dim(Index dim, const char* where) {
    int bits = 0;
    while ((Index{1} << bits) < dim) ++bits;
    if ((Index{1} << bits) != dim)
        throw std::invalid_argument(std::string(where) + ": dimension not a power of 2");
    return bits;
}

void fix_vector_phase(Vector& v) {
    Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const Complex pivot = v[imax];
    const double mag = std::abs(pivot);
    if (mag > 0) v *= std::conj(pivot) / mag;
}

// The unique parity +1 combination inside a degenerate eigenspace spanned by
// the columns of Vg; pdiag is the computational-basis parity diagonal.
Vector parity_plus_member(const Matrix& Vg, const RealVector& pdiag) {
    Matrix scaled = Vg;
    scaled.array().colwise() *= pdiag.array();
    Matrix M = Vg.adjoint() * scaled;
    M = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(M);
    if (solver.info() != Eigen::Success)
        throw numeric_error("parity projection failed to converge");
    int plus_count = 0;
    Index plus_idx = 0;
    for (Index k = 0; k < M.rows(); ++k) {
        if (solver.eigenvalues()[k] > 0.99) {
            ++plus_count;
            plus_idx = k;
        }
    }
    if (plus_count != 1)
        throw degeneracy_error("degenerate ground level has " +
                               std::to_string(plus_count) +
                               " parity +1 members; cannot select one");
    Vector v = Vg * solver.eigenvectors().col(plus_idx);
    fix_vector_phase(v);
    return v;
}

// Ground vector of a factor spectrum; a degenerate ground level is resolved
// to its parity +1 combination.
Vector resolved_ground(const Spectrum& s, int sites) {
    const double tol = std::max(1e-9 * s.spectral_scale(), 1e-12);
    Index g = 1;
    while (g < s.dim() && s.eigenvalues[g] - s.eigenvalues[0] <= tol) ++g;
    if (g == 1) {
        Vector v = s.eigenvectors.col(0);
        fix_vector_phase(v);
        return v;
    }
    return parity_plus_member(s.eigenvectors.leftCols(g), parity_diagonal(sites, 0));
}

}  // namespace

Vector kron_vector(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

Matrix amplitude_matrix(const QuantumState& state) {
    const int L = int(state.layout.ring_sites.size());
    const int n = int(state.layout.qubit_sites.size());
    const int total = L + n;
    if (state.dim() != (Index{1} << total))
        throw std::invalid_argument("amplitude_matrix: layout does not match state size");
    if (!state.layout.valid())
        throw std::invalid_argument("amplitude_matrix: invalid layout");
    const Index dr = Index{1} << L, dq = Index{1} << n;

    if (state.layout.is_standard()) {
        return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                              Eigen::RowMajor>>(
            state.amplitudes.data(), dr, dq);
    }
    Matrix out(dr, dq);
    for (Index a = 0; a < state.dim(); ++a) {
        Index r = 0, q = 0;
        for (int i = 0; i < L; ++i)
            r |= ((a >> (total - 1 - state.layout.ring_sites[i])) & 1) << (L - 1 - i);
        for (int j = 0; j < n; ++j)
            q |= ((a >> (total - 1 - state.layout.qubit_sites[j])) & 1) << (n - 1 - j);
        out(r, q) = state.amplitudes[a];
    }
    return out;
}

QuantumState ground_product_state(const Spectrum& ring, const Spectrum& qubits) {
    const int L = log2_dim(ring.dim(), "ground_product_state");
    const int n = log2_dim(qubits.dim(), "ground_product_state");
    QuantumState state;
    state.layout = SiteLayout::standard(L, n);
    state.amplitudes = kron_vector(resolved_ground(ring, L), resolved_ground(qubits, n));
    state.amplitudes.normalize();
    return state;
}

QuantumState maximally_coherent_state(const Spectrum& ring, int N,
                                      const std::vector<double>& phases,
                                      const Vector& qubit_state) {
    const int L = log2_dim(ring.dim(), "maximally_coherent_state");
    const int n = log2_dim(qubit_state.size(), "maximally_coherent_state");
    if (N < 1 || Index(N) > ring.dim())
        throw std::invalid_argument("maximally_coherent_state: N out of range 1..2^L");
    if (Index(phases.size()) != Index(N))
        throw std::invalid_argument("maximally_coherent_state: need one phase per level");

    Vector ring_vec = Vector::Zero(ring.dim());
    const double amp = 1.0 / std::sqrt(double(N));
    for (int m = 0; m < N; ++m)
        ring_vec += amp * std::exp(Complex(0, phases[m])) * ring.eigenvectors.col(m);

    QuantumState state;
    state.layout = SiteLayout::standard(L, n);
    state.amplitudes = kron_vector(ring_vec, qubit_state);
    state.amplitudes.normalize();
    return state;
}

QuantumState maximally_coherent_state(const Spectrum& ring, int N,
                                      RandomStream& phase_stream,
                                      const Vector& qubit_state) {
    if (N < 1 || Index(N) > ring.dim())
        throw std::invalid_argument("maximally_coherent_state: N out of range 1..2^L");
    std::vector<double> phases(N);
    for (auto& p : phases) p = phase_stream.uniform(0.0, 2.0 * M_PI);
    return maximally_coherent_state(ring, N, phases, qubit_state);
}

QuantumState evolve(const QuantumState& state0, const Spectrum& post_quench,
                    double t) {
    if (state0.dim() != post_quench.dim())
        throw std::invalid_argument("evolve: state and spectrum dimensions differ");
    Vector c = post_quench.eigenvectors.adjoint() * state0.amplitudes;
    const Eigen::ArrayXd ang = post_quench.eigenvalues.array() * (-t);
    c.array() *= ang.cos() + Complex(0, 1) * ang.sin();
    QuantumState out;
    out.layout = state0.layout;
    out.amplitudes = post_quench.eigenvectors * c;
    return out;
}

namespace {

ReducedDensityMatrix reduce(const QuantumState& state, Subsystem which) {
    const Matrix A = amplitude_matrix(state);
    ReducedDensityMatrix rho;
    rho.subsystem = which;
    rho.entries = which == Subsystem::Qubits ? Matrix(A.adjoint() * A)
                                             : Matrix(A * A.adjoint());
    rho.entries = 0.5 * (rho.entries + rho.entries.adjoint());
    return rho;
}

}  // namespace

ReducedDensityMatrix reduce_to_qubits(const QuantumState& state) {
    return reduce(state, Subsystem::Qubits);
}

ReducedDensityMatrix reduce_to_ring(const QuantumState& state) {
    return reduce(state, Subsystem::Ring);
}

double purity(const ReducedDensityMatrix& rho) { return rho.entries.squaredNorm(); }

double linear_entropy(const ReducedDensityMatrix& rho) { return 1.0 - purity(rho); }

double ipr(const QuantumState& state, const Spectrum& basis) {
    if (state.dim() != basis.dim())
        throw std::invalid_argument("ipr: state and basis dimensions differ");
    const Vector c = basis.eigenvectors.adjoint() * state.amplitudes;
    return c.cwiseAbs2().squaredNorm();
}

double coherence_measure(const Matrix& rho, const Spectrum& basis) {
    if (rho.rows() != basis.dim() || rho.cols() != basis.dim())
        throw std::invalid_argument("coherence_measure: dimension mismatch");
    const Matrix in_basis = basis.eigenvectors.adjoint() * rho * basis.eigenvectors;
    return in_basis.squaredNorm() - in_basis.diagonal().cwiseAbs2().sum();
}

double coherence_measure(const ReducedDensityMatrix& rho, const Spectrum& basis) {
    return coherence_measure(rho.entries, basis);
}

QuenchSystem prepare_quench_system(const HamiltonianSpec& spec) {
    spec.validate();
    QuenchSystem sys;
    sys.spec = spec;

    RandomStream field_stream(derive_seed(spec.seed, 0x3));
    if (spec.model == Model::SunburstIsing)
        sys.fields = spec.field_disordered() ? draw_fields(spec, field_stream)
                                             : RealVector::Constant(spec.L, spec.h_lo);
    else
        sys.fields = spec.D > 0 ? draw_fields(spec, field_stream)
                                : RealVector::Zero(spec.L);

    const Matrix ring_h = spec.model == Model::SunburstIsing
                              ? build_ising_ring(spec.L, spec.J, sys.fields)
                              : build_xxz_ring(spec.L, sys.fields);
    sys.ring = eigendecompose(ring_h);
    sys.qubits = eigendecompose(build_isolated_qubits(spec.n, spec.delta));

    const Matrix full = spec.model == Model::SunburstIsing
                            ? build_sunburst(spec, sys.fields)
                            : build_xxz_sunburst(spec, sys.fields);
    sys.full = eigendecompose(full);
    return sys;
}

QuantumState initial_state(const QuenchSystem& sys, const InitialStateRecipe& recipe) {
    if (recipe.kind == InitialStateRecipe::Kind::GroundProduct)
        return ground_product_state(sys.ring, sys.qubits);
    const Vector qubit_ground = resolved_ground(sys.qubits, sys.spec.n);
    if (recipe.phases)
        return maximally_coherent_state(sys.ring, recipe.coherent_levels,
                                        *recipe.phases, qubit_ground);
    RandomStream phase_stream(
        derive_seed(sys.spec.seed, 0x2, std::uint64_t(recipe.coherent_levels)));
    return maximally_coherent_state(sys.ring, recipe.coherent_levels, phase_stream,
                                    qubit_ground);
}

namespace {

std::optional<RealVector> analytic_curve(const QuenchSystem& sys,
                                         const InitialStateRecipe& recipe,
                                         const RealVector& times,
                                         AnalyticKind kind) {
    const auto& spec = sys.spec;
    const bool uniform_field = !spec.field_disordered();
    const bool full_coherent =
        recipe.kind == InitialStateRecipe::Kind::MaximallyCoherent &&
        Index(recipe.coherent_levels) == sys.ring.dim();

    auto limiting = [&]() -> std::optional<RealVector> {
        if (spec.n != 1 || spec.model != Model::SunburstIsing || !uniform_field)
            return std::nullopt;
        const bool weak = spec.h_lo <= 0.1 + 1e-12 && spec.h_lo <= spec.J;
        const bool strong = !weak && spec.J <= 0.1 + 1e-12;
        if (!weak && !strong) return std::nullopt;
        const LimitingRegime regime =
            weak ? weak_field_regime(spec.delta, spec.kappa)
                 : strong_field_regime(spec.h_lo, spec.delta, spec.kappa);
        RealVector curve(times.size());
        for (Index i = 0; i < times.size(); ++i)
            curve[i] = limiting_entropy(times[i], spec.kappa, regime);
        return curve;
    };
    auto transition = [&]() -> std::optional<RealVector> {
        const double s2_inf = lubkin_value(spec.n);
        RealVector curve(times.size());
        for (Index i = 0; i < times.size(); ++i)
            curve[i] = full_transition_curve(times[i], spec.kappa, spec.n, s2_inf);
        return curve;
    };

    switch (kind) {
        case AnalyticKind::None:
            return std::nullopt;
        case AnalyticKind::LimitingCase:
            return limiting();
        case AnalyticKind::TransitionCurve:
            return transition();
        case AnalyticKind::Auto:
            if (full_coherent && spec.kappa > 0) return transition();
            if (recipe.kind == InitialStateRecipe::Kind::GroundProduct)
                return limiting();
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

QuenchTrace run_quench(const QuenchSystem& sys, const InitialStateRecipe& recipe,
                       const RealVector& times, const QuenchOptions& options) {
    if (times.size() == 0)
        throw std::invalid_argument("run_quench: empty time grid");
    const Index dim = sys.full.dim();
    const Index dr = sys.ring.dim(), dq = sys.qubits.dim();

    const QuantumState psi0 = initial_state(sys, recipe);
    if (psi0.norm_deviation() > 1e-10)
        throw numeric_error("run_quench: initial state not normalized");

    // Eigenbasis coefficients of the initial state; |c_k| never changes.
    const RealVector p0r = psi0.amplitudes.real(), p0i = psi0.amplitudes.imag();
    Vector c(dim);
    if (sys.full.real_eigenvectors) {
        const RealMatrix& Vr = *sys.full.real_eigenvectors;
        c.real() = Vr.transpose() * p0r;
        c.imag() = Vr.transpose() * p0i;
    } else {
        c = sys.full.eigenvectors.adjoint() * psi0.amplitudes;
    }
    const Eigen::ArrayXd cr = c.real(), ci = c.imag();

    QuenchTrace trace;
    trace.times = times;
    trace.linear_entropy.resize(times.size());
    trace.purity.resize(times.size());
    if (options.record_ipr) trace.ipr = RealVector(times.size());

    const double s_max = lubkin_value(sys.spec.n);
    const Index chunk = std::max<Index>(1, options.time_chunk);
    RealMatrix Xre(dim, chunk), Xim(dim, chunk);
    Matrix psi_block(dim, chunk);

    for (Index start = 0; start < times.size(); start += chunk) {
        const Index nb = std::min(chunk, times.size() - start);
        for (Index j = 0; j < nb; ++j) {
            const Eigen::ArrayXd ang = sys.full.eigenvalues.array() * (-times[start + j]);
            const Eigen::ArrayXd pc = ang.cos(), ps = ang.sin();
            Xre.col(j) = cr * pc - ci * ps;
            Xim.col(j) = cr * ps + ci * pc;
        }
        if (sys.full.real_eigenvectors) {
            const RealMatrix& Vr = *sys.full.real_eigenvectors;
            psi_block.leftCols(nb).real() = Vr * Xre.leftCols(nb);
            psi_block.leftCols(nb).imag() = Vr * Xim.leftCols(nb);
        } else {
            Matrix X(dim, nb);
            X.real() = Xre.leftCols(nb);
            X.imag() = Xim.leftCols(nb);
            psi_block.leftCols(nb) = sys.full.eigenvectors * X;
        }

        for (Index j = 0; j < nb; ++j) {
            const Index k = start + j;
            const double norm = psi_block.col(j).norm();
            if (std::abs(norm - 1.0) > 1e-10)
                throw numeric_error("run_quench: norm drift " +
                                    std::to_string(std::abs(norm - 1.0)) +
                                    " at t = " + std::to_string(times[k]));

            const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic,
                                                 Eigen::Dynamic, Eigen::RowMajor>>
                A(psi_block.col(j).data(), dr, dq);
            const Matrix rho = A.adjoint() * A;
            const double pur = rho.squaredNorm();
            trace.purity[k] = pur;
            trace.linear_entropy[k] = 1.0 - pur;
            if (trace.linear_entropy[k] < -1e-10 ||
                trace.linear_entropy[k] > s_max + 1e-10)
                throw numeric_error("run_quench: entropy out of bounds at t = " +
                                    std::to_string(times[k]));

            if (options.record_ipr) {
                // overlaps with the pre-quench product eigenbasis
                const Matrix C = sys.ring.eigenvectors.adjoint() *
                                 (A * sys.qubits.eigenvectors.conjugate());
                (*trace.ipr)[k] = C.cwiseAbs2().squaredNorm();
            }
        }
    }

    trace.analytic = analytic_curve(sys, recipe, times, options.analytic);
    return trace;
}

QuenchTrace run_quench(const HamiltonianSpec& spec, const InitialStateRecipe& recipe,
                       const RealVector& times, const QuenchOptions& options) {
    return run_quench(prepare_quench_system(spec), recipe, times, options);
}

std::pair<double, double> time_statistics(const QuenchTrace& trace, double window_lo,
                                          double window_hi) {
    double sum = 0.0;
    Index count = 0;
    for (Index i = 0; i < trace.times.size(); ++i) {
        if (trace.times[i] >= window_lo && trace.times[i] <= window_hi) {
            sum += trace.linear_entropy[i];
            ++count;
        }
    }
    if (count == 0)
        throw std::invalid_argument("time_statistics: window contains no samples");
    const double mean = sum / double(count);
    double ss = 0.0;
    for (Index i = 0; i < trace.times.size(); ++i) {
        if (trace.times[i] >= window_lo && trace.times[i] <= window_hi) {
            const double d = trace.linear_entropy[i] - mean;
            ss += d * d;
        }
    }
    return {mean, ss / double(count)};
}

double pearson_correlation(const RealVector& x, const RealVector& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson_correlation: need two equal-length series");
    const double mx = x.mean(), my = y.mean();
    const RealVector dx = x.array() - mx, dy = y.array() - my;
    const double denom = dx.norm() * dy.norm();
    if (denom == 0.0) return 0.0;
    return dx.dot(dy) / denom;
}

}  // namespace sunburst
