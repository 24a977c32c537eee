#pragma once

#include "qadd/matcore.hpp"

#include <string>
#include <vector>

namespace qadd {

/// The two-qudit swap operator S |a>|b> = |b>|a>.
Eigen::MatrixXcd swap_operator(int d);

/// The partial-swap unitary sqrt(alpha) I + i sqrt(1-alpha) S on C^d (x) C^d.
/// Conjugating rho (x) sigma by it and tracing out the second qudit realizes
/// the quantum addition channel.
struct PartialSwap {
    int d = 0;
    double alpha = 0.0;
    Eigen::MatrixXcd unitary;

    static PartialSwap make(int d, double alpha);

    /// tr_2[ U (rho (x) sigma) U^dag ].
    DensityMatrix apply(const DensityMatrix& rho, const DensityMatrix& sigma) const;
};

/// A set of Kraus operators forming a CPTP map. Completeness
/// sum_i K_i^dag K_i = I is validated at construction (tolerance 1e-10).
class KrausSet {
public:
    KrausSet(std::vector<Eigen::MatrixXcd> operators, int input_dim, int output_dim);

    const std::vector<Eigen::MatrixXcd>& operators() const { return ops_; }
    int input_dim() const { return input_dim_; }
    int output_dim() const { return output_dim_; }

    /// max-entry deviation of sum K^dag K from the identity.
    double completeness_defect() const;

private:
    std::vector<Eigen::MatrixXcd> ops_;
    int input_dim_;
    int output_dim_;
};

enum class IncoherentKind { permutation_sio, dephase, general_io };

/// A channel whose Kraus operators map diagonal states to diagonal states.
/// The constructor verifies incoherence preservation on all basis projectors
/// (tolerance 1e-10) in addition to KrausSet completeness.
struct IncoherentChannel {
    KrausSet kraus;
    IncoherentKind kind;

    IncoherentChannel(KrausSet k, IncoherentKind kd);
};

/// Quantum addition in closed form:
///   alpha rho + (1-alpha) sigma - i sqrt(alpha(1-alpha)) [rho, sigma].
/// This routine is the single definition of the channel used everywhere.
DensityMatrix quantum_add(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha);

/// Kraus operators K_n = sqrt(alpha) I (x) <n| + i sqrt(1-alpha) <n| (x) I of
/// the addition channel, mapping C^{d^2} to C^d.
KrausSet addition_kraus(int d, double alpha);

/// Quantum addition evaluated as sum_n K_n (rho (x) sigma) K_n^dag.
/// Independent of quantum_add's closed form; the two must agree to 1e-10.
DensityMatrix quantum_add_via_kraus(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    double alpha);

/// Removes all off-diagonal entries (computational basis).
DensityMatrix dephase(const DensityMatrix& rho);

/// Dephasing in the basis given by the columns of a unitary:
/// U diag(U^dag rho U) U^dag.
DensityMatrix dephase(const DensityMatrix& rho, const Eigen::MatrixXcd& basis);

/// The dephasing channel { |k><k| } as a KrausSet.
KrausSet dephasing_kraus(int d);

/// Random strictly incoherent channel with n_kraus operators
/// K_i = sum_k d_ik |pi(k)><k|: one permutation pi per channel, complex
/// Gaussian coefficients rescaled so that sum_i |d_ik|^2 = 1 for every k.
IncoherentChannel random_sio(int d, int n_kraus, std::uint64_t seed);

/// Random incoherent channel that is not strictly incoherent: its Kraus
/// operators K_j = sum_k d_jk |f(k)><k| use a non-injective image function f,
/// with discrete-Fourier phases across the columns of each collision class so
/// that sum_j K_j^dag K_j = I still holds. Used for reporting behavior
/// outside the strictly incoherent class.
IncoherentChannel random_io(int d, std::uint64_t seed);

/// sum_i K_i rho K_i^dag.
DensityMatrix apply_channel(const KrausSet& ch, const DensityMatrix& rho);

/// Max-entry residual of Lambda(rho) boxplus Lambda(sigma) - Lambda(rho boxplus sigma)
/// for an incoherent channel and a diagonal sigma. Rejects non-diagonal sigma.
double lemma_commutation_residual(const DensityMatrix& rho, const DensityMatrix& sigma_incoh,
                                  const IncoherentChannel& ch, double alpha);

}  // namespace qadd
