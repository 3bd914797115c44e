#include "sunburst/spectral.hpp"

#include "sunburst/operators.hpp"
#include "sunburst/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace sunburst {

namespace {

constexpr double kHermTol = 1e-12;

void require_hermitian(const Matrix& H, const char* where) {
    if (H.rows() == 0 || H.rows() != H.cols())
        throw std::invalid_argument(std::string(where) + ": matrix not square");
    if (hermiticity_residual(H) > kHermTol)
        throw std::invalid_argument(std::string(where) + ": matrix not Hermitian");
}

bool is_purely_real(const Matrix& H) {
    return H.imag().cwiseAbs().maxCoeff() == 0.0;
}

// Rotate each column so its largest-magnitude entry is real positive; makes
// eigenvector phases deterministic for non-degenerate levels.
void fix_column_phases(Matrix& V) {
    for (Index k = 0; k < V.cols(); ++k) {
        Index imax = 0;
        V.col(k).cwiseAbs().maxCoeff(&imax);
        const Complex pivot = V(imax, k);
        const double mag = std::abs(pivot);
        if (mag > 0) V.col(k) *= std::conj(pivot) / mag;
    }
}

void fix_column_signs(RealMatrix& V) {
    for (Index k = 0; k < V.cols(); ++k) {
        Index imax = 0;
        V.col(k).cwiseAbs().maxCoeff(&imax);
        if (V(imax, k) < 0) V.col(k) = -V.col(k);
    }
}

// Spot-check |H v - E v| on a strided sample of columns; a full check is
// O(dim^3) and lives in validate_spectrum.
void check_sampled_residuals(const Matrix& H, const Spectrum& s) {
    const Index dim = s.dim();
    const double scale = std::max(s.spectral_scale(), 1e-300);
    const Index samples = std::min<Index>(dim, 48);
    const Index stride = std::max<Index>(1, dim / samples);
    for (Index k = 0; k < dim; k += stride) {
        const double res =
            (H * s.eigenvectors.col(k) - s.eigenvalues[k] * s.eigenvectors.col(k))
                .cwiseAbs()
                .maxCoeff();
        if (res > 1e-9 * scale)
            throw numeric_error("eigendecompose: residual " + std::to_string(res) +
                                " exceeds tolerance at level " + std::to_string(k));
    }
}

}  // namespace

Spectrum eigendecompose(const HermitianOperator& H) {
    require_hermitian(H, "eigendecompose");
    Spectrum s;
    if (is_purely_real(H)) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(H.real());
        if (solver.info() != Eigen::Success)
            throw numeric_error("eigendecompose: real solver did not converge");
        s.eigenvalues = solver.eigenvalues();
        RealMatrix V = solver.eigenvectors();
        fix_column_signs(V);
        s.eigenvectors = V.cast<Complex>();
        s.real_eigenvectors = std::move(V);
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
        if (solver.info() != Eigen::Success)
            throw numeric_error("eigendecompose: complex solver did not converge");
        s.eigenvalues = solver.eigenvalues();
        s.eigenvectors = solver.eigenvectors();
        fix_column_phases(s.eigenvectors);
    }
    check_sampled_residuals(H, s);
    return s;
}

RealVector eigenvalues_only(const HermitianOperator& H) {
    require_hermitian(H, "eigenvalues_only");
    if (is_purely_real(H)) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(H.real(),
                                                         Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw numeric_error("eigenvalues_only: real solver did not converge");
        return solver.eigenvalues();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(H, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numeric_error("eigenvalues_only: complex solver did not converge");
    return solver.eigenvalues();
}

std::vector<Index> sector_indices(const RealVector& diag, ParitySector sector) {
    const double want = sector == ParitySector::Minus ? -1.0 : 1.0;
    std::vector<Index> idx;
    idx.reserve(diag.size() / 2);
    for (Index a = 0; a < diag.size(); ++a)
        if (diag[a] == want) idx.push_back(a);
    return idx;
}

std::pair<Spectrum, Spectrum> parity_sectors(const Spectrum& spectrum,
                                             const HermitianOperator& P) {
    const Index dim = spectrum.dim();
    if (P.rows() != dim)
        throw std::invalid_argument("parity_sectors: dimension mismatch");

    const bool diag_P = (P - Matrix(P.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;

    Matrix V = spectrum.eigenvectors;
    auto parity_expectation = [&](Index k) -> double {
        if (diag_P)
            return (P.diagonal().real().array() * V.col(k).cwiseAbs2().array()).sum();
        return std::real(Complex(V.col(k).dot(P * V.col(k))));
    };

    RealVector p(dim);
    for (Index k = 0; k < dim; ++k) p[k] = parity_expectation(k);

    // Re-rotate degenerate groups containing ambiguous vectors. P maps a
    // degenerate eigenspace to itself when [H, P] = 0, so diagonalizing the
    // projected parity splits the group into definite-parity states.
    const double scale = std::max(spectrum.spectral_scale(), 1.0);
    const double group_tol = 1e-8 * scale;
    Index k = 0;
    while (k < dim) {
        Index end = k + 1;
        while (end < dim && spectrum.eigenvalues[end] - spectrum.eigenvalues[end - 1] <= group_tol)
            ++end;
        bool ambiguous = false;
        for (Index j = k; j < end; ++j) ambiguous |= std::abs(p[j]) <= 0.99;
        if (ambiguous && end - k > 1) {
            const Index g = end - k;
            Matrix block = V.middleCols(k, g);
            Matrix small = block.adjoint() * (P * block);
            small = 0.5 * (small + small.adjoint());
            Eigen::SelfAdjointEigenSolver<Matrix> solver(small);
            if (solver.info() != Eigen::Success)
                throw numeric_error("parity_sectors: group rotation failed");
            V.middleCols(k, g) = block * solver.eigenvectors();
            for (Index j = k; j < end; ++j) p[j] = parity_expectation(j);
        }
        k = end;
    }

    std::vector<Index> plus, minus;
    for (Index j = 0; j < dim; ++j) {
        if (p[j] > 0.99)
            plus.push_back(j);
        else if (p[j] < -0.99)
            minus.push_back(j);
        else
            throw degeneracy_error("parity_sectors: level " + std::to_string(j) +
                                   " has |<P>| = " + std::to_string(std::abs(p[j])) +
                                   " <= 0.99 after re-rotation");
    }

    auto gather = [&](const std::vector<Index>& idx, ParitySector sec) {
        Spectrum out;
        out.sector = sec;
        out.eigenvalues.resize(Index(idx.size()));
        out.eigenvectors.resize(dim, Index(idx.size()));
        for (Index j = 0; j < Index(idx.size()); ++j) {
            out.eigenvalues[j] = spectrum.eigenvalues[idx[j]];
            out.eigenvectors.col(j) = V.col(idx[j]);
        }
        return out;
    };
    return {gather(plus, ParitySector::Plus), gather(minus, ParitySector::Minus)};
}

RatioStatistics spacing_ratios(const RealVector& eigenvalues_ascending) {
    const Index m = eigenvalues_ascending.size();
    if (m < 3)
        throw std::invalid_argument("spacing_ratios: need at least 3 eigenvalues");
    for (Index i = 0; i + 1 < m; ++i)
        if (eigenvalues_ascending[i + 1] < eigenvalues_ascending[i])
            throw std::invalid_argument("spacing_ratios: eigenvalues not ascending");

    RatioStatistics stats;
    stats.ratios.reserve(m - 2);
    double prev = eigenvalues_ascending[1] - eigenvalues_ascending[0];
    if (prev == 0.0) ++stats.zero_spacings;
    for (Index i = 1; i + 1 < m; ++i) {
        const double cur = eigenvalues_ascending[i + 1] - eigenvalues_ascending[i];
        if (cur == 0.0) ++stats.zero_spacings;
        const double hi = std::max(prev, cur);
        stats.ratios.push_back(hi > 0.0 ? std::min(prev, cur) / hi : 0.0);
        prev = cur;
    }
    stats.mean = std::accumulate(stats.ratios.begin(), stats.ratios.end(), 0.0) /
                 double(stats.ratios.size());
    return stats;
}

namespace {

// <r> of one disorder realization: build, restrict to the sector block in
// the computational basis (P is diagonal there), trim spectral edges.
double realization_mean_r(const HamiltonianSpec& spec, double kappa,
                          std::uint64_t realization, const SweepOptions& options) {
    HamiltonianSpec local = spec;
    local.kappa = kappa;
    RandomStream stream(derive_seed(spec.seed, 0x1, realization));
    const RealVector fields = draw_fields(local, stream);
    const Matrix H = local.model == Model::SunburstIsing
                         ? build_sunburst(local, fields)
                         : build_xxz_sunburst(local, fields);

    const RealVector pdiag = parity_diagonal(local.L, local.n);
    const std::vector<Index> idx = sector_indices(pdiag, options.sector);
    Matrix block(idx.size(), idx.size());
    for (size_t j = 0; j < idx.size(); ++j)
        for (size_t i = 0; i < idx.size(); ++i) block(i, j) = H(idx[i], idx[j]);

    RealVector evals = eigenvalues_only(block);
    const Index m = evals.size();
    const Index cut = Index(std::floor(options.trim_fraction * double(m)));
    if (m - 2 * cut < 3)
        throw std::invalid_argument("rratio_sweep: trimming leaves fewer than 3 levels");
    return spacing_ratios(evals.segment(cut, m - 2 * cut)).mean;
}

}  // namespace

std::vector<SweepRow> rratio_sweep(const HamiltonianSpec& spec_template,
                                   const std::vector<double>& kappa_grid,
                                   int realizations, const SweepOptions& options) {
    if (kappa_grid.empty())
        throw std::invalid_argument("rratio_sweep: empty kappa grid");
    if (realizations < 1)
        throw std::invalid_argument("rratio_sweep: realizations must be >= 1");
    if (options.trim_fraction < 0 || options.trim_fraction >= 0.5)
        throw std::invalid_argument("rratio_sweep: trim fraction must be in [0, 0.5)");
    if (options.sector == ParitySector::Unresolved)
        throw std::invalid_argument("rratio_sweep: sector must be Plus or Minus");
    spec_template.validate();

    // Flattened (kappa, realization) work items; slot-indexed writes keep the
    // reduction deterministic under any scheduling.
    const size_t jobs = kappa_grid.size() * size_t(realizations);
    std::vector<double> means(jobs, 0.0);
    std::vector<std::string> failures(jobs);
    std::atomic<size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const size_t j = next.fetch_add(1);
            if (j >= jobs) return;
            const size_t ik = j / size_t(realizations);
            const std::uint64_t r = j % size_t(realizations);
            try {
                means[j] = realization_mean_r(spec_template, kappa_grid[ik], r, options);
            } catch (const std::exception& e) {
                failures[j] = "kappa " + std::to_string(kappa_grid[ik]) +
                              ", realization " + std::to_string(r) + ": " + e.what();
            }
        }
    };

    int nthreads = options.threads > 0
                       ? options.threads
                       : int(std::max(1u, std::thread::hardware_concurrency()));
    nthreads = int(std::min<size_t>(nthreads, jobs));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& f : failures)
        if (!f.empty()) throw numeric_error("rratio_sweep: " + f);

    std::vector<SweepRow> rows;
    rows.reserve(kappa_grid.size());
    for (size_t ik = 0; ik < kappa_grid.size(); ++ik) {
        SweepRow row;
        row.kappa = kappa_grid[ik];
        row.realizations = realizations;
        row.sector = options.sector;
        const double* first = &means[ik * size_t(realizations)];
        double sum = 0.0;
        for (int r = 0; r < realizations; ++r) sum += first[r];
        row.mean_r = sum / realizations;
        if (realizations > 1) {
            double ss = 0.0;
            for (int r = 0; r < realizations; ++r) {
                const double d = first[r] - row.mean_r;
                ss += d * d;
            }
            row.stderr_mean = std::sqrt(ss / (realizations - 1.0) / realizations);
        }
        rows.push_back(row);
    }
    return rows;
}

Spectrum product_spectrum(const Spectrum& ring, const Spectrum& qubits) {
    const Index dr = ring.dim(), dq = qubits.dim();
    const Index dim = dr * dq;
    std::vector<Index> order(dim);
    std::iota(order.begin(), order.end(), 0);
    RealVector sums(dim);
    for (Index m = 0; m < dr; ++m)
        for (Index q = 0; q < dq; ++q)
            sums[m * dq + q] = ring.eigenvalues[m] + qubits.eigenvalues[q];
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return sums[a] < sums[b]; });

    Spectrum out;
    out.eigenvalues.resize(dim);
    out.eigenvectors.resize(dim, dim);
    for (Index k = 0; k < dim; ++k) {
        const Index m = order[k] / dq, q = order[k] % dq;
        out.eigenvalues[k] = sums[order[k]];
        // kron(v_ring, v_qubit), ring index major
        for (Index r = 0; r < dr; ++r)
            out.eigenvectors.col(k).segment(r * dq, dq) =
                ring.eigenvectors(r, m) * qubits.eigenvectors.col(q);
    }
    if (ring.real_eigenvectors && qubits.real_eigenvectors)
        out.real_eigenvectors = out.eigenvectors.real();
    return out;
}

SpectrumResiduals validate_spectrum(const HermitianOperator& H, const Spectrum& s) {
    SpectrumResiduals r{};
    const Matrix HV = H * s.eigenvectors;
    r.eigen_residual =
        (HV - s.eigenvectors * s.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
    r.orthonormality = (s.eigenvectors.adjoint() * s.eigenvectors -
                        Matrix::Identity(s.dim(), s.dim()))
                           .cwiseAbs()
                           .maxCoeff();
    r.reconstruction = (s.eigenvectors * s.eigenvalues.asDiagonal() *
                            s.eigenvectors.adjoint() - H)
                           .cwiseAbs()
                           .maxCoeff();
    return r;
}

}  // namespace sunburst
