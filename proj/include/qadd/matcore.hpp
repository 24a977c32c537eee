#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>

namespace qadd {

using cxd = std::complex<double>;

/// Tolerance used when validating Hermiticity / traces of constructed states.
inline constexpr double kHermTol = 1e-10;

/// Eigenvalues below this are treated as zero inside logarithms and entropies.
inline constexpr double kDefaultClipEps = 1e-12;

/// Derives an independent RNG seed for sub-task `index` of a computation
/// seeded with `seed` (splitmix64 finalizer). All randomized code in the
/// library draws through explicit seeds; there is no global RNG.
std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t index);

/// A d x d density matrix: Hermitian, PSD, unit trace.
///
/// Construction symmetrizes the input as (M + M^dag)/2 after checking that
/// the asymmetry is below kHermTol, verifies |tr - 1| <= kHermTol, and clips
/// eigenvalues in [-kHermTol, 0) to zero (renormalizing the trace). Anything
/// further from a valid state is rejected with std::invalid_argument.
class DensityMatrix {
public:
    explicit DensityMatrix(const Eigen::MatrixXcd& m);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return mat_; }
    cxd operator()(int i, int j) const { return mat_(i, j); }

private:
    Eigen::MatrixXcd mat_;
};

/// A Hermitian observable (no trace or positivity constraint).
class HermitianObservable {
public:
    explicit HermitianObservable(const Eigen::MatrixXcd& m);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return mat_; }

private:
    Eigen::MatrixXcd mat_;
};

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending,
/// eigenvectors as columns of a unitary.
struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
};

/// Kronecker product a (x) b.
Eigen::MatrixXcd tensor(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Trace over the second tensor factor of a (d*d) x (d*d) matrix,
/// returning a d x d matrix.
Eigen::MatrixXcd partial_trace_second(const Eigen::MatrixXcd& m, int d);

/// Block-diagonal state p*a (+) (1-p)*b of dimension dim(a) + dim(b).
DensityMatrix direct_sum(const DensityMatrix& a, const DensityMatrix& b, double p);

/// AB - BA. Anti-Hermitian whenever A and B are Hermitian.
Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Eigendecomposition of a Hermitian matrix. Rejects inputs whose asymmetry
/// exceeds 1e-8.
EigenDecomposition hermitian_eig(const Eigen::MatrixXcd& m);

/// Matrix natural logarithm of a Hermitian PSD matrix via its spectral
/// decomposition; eigenvalues are clipped below at clip_eps so that singular
/// inputs are absorbed rather than rejected. When clip_events is non-null it
/// receives the number of clipped eigenvalues.
Eigen::MatrixXcd matrix_log(const Eigen::MatrixXcd& m,
                            double clip_eps = kDefaultClipEps,
                            int* clip_events = nullptr);

/// Trace norm (sum of singular values).
double trace_norm(const Eigen::MatrixXcd& m);

enum class StateKind { pure_haar, ginibre_mixed, diagonal };

StateKind state_kind_from_string(const std::string& s);
std::string to_string(StateKind k);

/// Random d-dimensional state, deterministic in `seed`:
///  - pure_haar:     projector onto a normalized complex-Gaussian vector,
///  - ginibre_mixed: G G^dag / tr(G G^dag) with G a d x d complex Ginibre,
///  - diagonal:      uniform (Dirichlet) point on the probability simplex.
DensityMatrix random_density(int d, StateKind kind, std::uint64_t seed);

/// Haar-random unitary via QR of a complex Ginibre matrix, deterministic
/// in `seed`.
Eigen::MatrixXcd haar_unitary(int d, std::uint64_t seed);

}  // namespace qadd
