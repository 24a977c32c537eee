#include "qadd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qadd {

namespace {

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("alpha outside [0,1]");
    }
}

void check_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("dimension mismatch between states");
    }
}

bool is_diagonal(const Eigen::MatrixXcd& m, double tol) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j && std::abs(m(i, j)) > tol) return false;
        }
    }
    return true;
}

}  // namespace

Eigen::MatrixXcd swap_operator(int d) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            s(i * d + j, j * d + i) = 1.0;
        }
    }
    return s;
}

PartialSwap PartialSwap::make(int d, double alpha) {
    check_alpha(alpha);
    PartialSwap ps;
    ps.d = d;
    ps.alpha = alpha;
    ps.unitary = std::sqrt(alpha) * Eigen::MatrixXcd::Identity(d * d, d * d) +
                 cxd(0.0, 1.0) * std::sqrt(1.0 - alpha) * swap_operator(d);
    return ps;
}

DensityMatrix PartialSwap::apply(const DensityMatrix& rho, const DensityMatrix& sigma) const {
    check_same_dim(rho, sigma);
    if (rho.dim() != d) {
        throw std::invalid_argument("PartialSwap: state dimension mismatch");
    }
    const Eigen::MatrixXcd joint = unitary * tensor(rho.matrix(), sigma.matrix()) * unitary.adjoint();
    return DensityMatrix(partial_trace_second(joint, d));
}

KrausSet::KrausSet(std::vector<Eigen::MatrixXcd> operators, int input_dim, int output_dim)
    : ops_(std::move(operators)), input_dim_(input_dim), output_dim_(output_dim) {
    if (ops_.empty()) {
        throw std::invalid_argument("KrausSet: empty operator list");
    }
    for (const auto& k : ops_) {
        if (k.rows() != output_dim_ || k.cols() != input_dim_) {
            throw std::invalid_argument("KrausSet: operator with inconsistent dimensions");
        }
    }
    if (completeness_defect() > 1e-10) {
        throw std::invalid_argument("KrausSet: sum K^dag K deviates from identity");
    }
}

double KrausSet::completeness_defect() const {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(input_dim_, input_dim_);
    for (const auto& k : ops_) {
        acc += k.adjoint() * k;
    }
    acc -= Eigen::MatrixXcd::Identity(input_dim_, input_dim_);
    return acc.cwiseAbs().maxCoeff();
}

IncoherentChannel::IncoherentChannel(KrausSet k, IncoherentKind kd)
    : kraus(std::move(k)), kind(kd) {
    if (kraus.input_dim() != kraus.output_dim()) {
        throw std::invalid_argument("IncoherentChannel: operators must be square");
    }
    const int d = kraus.input_dim();
    for (const auto& op : kraus.operators()) {
        for (int b = 0; b < d; ++b) {
            // K |b><b| K^dag must stay diagonal for every basis projector
            const Eigen::VectorXcd col = op.col(b);
            if (!is_diagonal(col * col.adjoint(), 1e-10)) {
                throw std::invalid_argument(
                    "IncoherentChannel: Kraus operator maps a basis projector off the diagonal");
            }
        }
    }
}

DensityMatrix quantum_add(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha) {
    check_same_dim(rho, sigma);
    check_alpha(alpha);
    const Eigen::MatrixXcd& r = rho.matrix();
    const Eigen::MatrixXcd& s = sigma.matrix();
    const Eigen::MatrixXcd out = alpha * r + (1.0 - alpha) * s -
                                 cxd(0.0, 1.0) * std::sqrt(alpha * (1.0 - alpha)) * (r * s - s * r);
    return DensityMatrix(out);
}

KrausSet addition_kraus(int d, double alpha) {
    check_alpha(alpha);
    const double sa = std::sqrt(alpha);
    const cxd isb = cxd(0.0, 1.0) * std::sqrt(1.0 - alpha);
    std::vector<Eigen::MatrixXcd> ops;
    ops.reserve(d);
    for (int n = 0; n < d; ++n) {
        Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(d, d * d);
        for (int i = 0; i < d; ++i) {
            // sqrt(alpha) I (x) <n|  picks component |i>|n>
            k(i, i * d + n) += sa;
            // i sqrt(1-alpha) <n| (x) I  picks component |n>|i>
            k(i, n * d + i) += isb;
        }
        ops.push_back(std::move(k));
    }
    return KrausSet(std::move(ops), d * d, d);
}

DensityMatrix quantum_add_via_kraus(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    double alpha) {
    check_same_dim(rho, sigma);
    const int d = rho.dim();
    const KrausSet ks = addition_kraus(d, alpha);
    const Eigen::MatrixXcd joint = tensor(rho.matrix(), sigma.matrix());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& k : ks.operators()) {
        out += k * joint * k.adjoint();
    }
    return DensityMatrix(out);
}

DensityMatrix dephase(const DensityMatrix& rho) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
    out.diagonal() = rho.matrix().diagonal();
    return DensityMatrix(out);
}

DensityMatrix dephase(const DensityMatrix& rho, const Eigen::MatrixXcd& basis) {
    const int d = rho.dim();
    if (basis.rows() != d || basis.cols() != d) {
        throw std::invalid_argument("dephase: basis dimension mismatch");
    }
    const Eigen::MatrixXcd defect =
        basis.adjoint() * basis - Eigen::MatrixXcd::Identity(d, d);
    if (defect.cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("dephase: basis is not unitary");
    }
    const Eigen::MatrixXcd rotated = basis.adjoint() * rho.matrix() * basis;
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(d, d);
    diag.diagonal() = rotated.diagonal();
    return DensityMatrix(basis * diag * basis.adjoint());
}

KrausSet dephasing_kraus(int d) {
    std::vector<Eigen::MatrixXcd> ops;
    ops.reserve(d);
    for (int k = 0; k < d; ++k) {
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
        p(k, k) = 1.0;
        ops.push_back(std::move(p));
    }
    return KrausSet(std::move(ops), d, d);
}

IncoherentChannel random_sio(int d, int n_kraus, std::uint64_t seed) {
    if (d < 2 || n_kraus < 1) {
        throw std::invalid_argument("random_sio: need d >= 2, n_kraus >= 1");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // one permutation shared by every Kraus operator; independent permutations
    // are incoherence-preserving but do not commute with the addition channel
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    Eigen::MatrixXcd coeff(n_kraus, d);
    for (int i = 0; i < n_kraus; ++i) {
        for (int k = 0; k < d; ++k) {
            coeff(i, k) = cxd(gauss(rng), gauss(rng));
        }
    }
    for (int k = 0; k < d; ++k) {
        coeff.col(k) /= coeff.col(k).norm();
    }

    std::vector<Eigen::MatrixXcd> ops;
    ops.reserve(n_kraus);
    for (int i = 0; i < n_kraus; ++i) {
        Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(d, d);
        for (int c = 0; c < d; ++c) {
            k(perm[c], c) += coeff(i, c);
        }
        ops.push_back(std::move(k));
    }
    return IncoherentChannel(KrausSet(std::move(ops), d, d), IncoherentKind::permutation_sio);
}

IncoherentChannel random_io(int d, std::uint64_t seed) {
    if (d < 2) {
        throw std::invalid_argument("random_io: need d >= 2");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);

    // non-injective image function; collisions are what breaks strictness
    std::vector<int> image(d);
    bool injective = true;
    do {
        for (auto& v : image) v = static_cast<int>(rng() % static_cast<std::uint64_t>(d));
        std::vector<int> seen(d, 0);
        injective = true;
        for (int v : image) {
            if (seen[v]++ > 0) injective = false;
        }
    } while (injective);

    std::vector<std::vector<int>> classes(d);
    for (int k = 0; k < d; ++k) classes[image[k]].push_back(k);
    std::size_t n_ops = 1;
    for (const auto& cls : classes) n_ops = std::max(n_ops, cls.size());

    // Fourier phases across each collision class cancel the cross terms of
    // sum_j K_j^dag K_j; random per-column phases keep the draw generic
    std::vector<Eigen::MatrixXcd> ops(n_ops, Eigen::MatrixXcd::Zero(d, d));
    for (int y = 0; y < d; ++y) {
        const auto& cls = classes[y];
        const std::size_t m = cls.size();
        if (m == 0) continue;
        for (std::size_t idx = 0; idx < m; ++idx) {
            const cxd col_phase = std::polar(1.0, angle(rng));
            for (std::size_t j = 0; j < m; ++j) {
                const double theta = 2.0 * M_PI * static_cast<double>(j * idx) / m;
                ops[j](y, cls[idx]) +=
                    col_phase * std::polar(1.0 / std::sqrt(static_cast<double>(m)), theta);
            }
        }
    }
    return IncoherentChannel(KrausSet(std::move(ops), d, d), IncoherentKind::general_io);
}

DensityMatrix apply_channel(const KrausSet& ch, const DensityMatrix& rho) {
    if (ch.input_dim() != rho.dim()) {
        throw std::invalid_argument("apply_channel: dimension mismatch");
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ch.output_dim(), ch.output_dim());
    for (const auto& k : ch.operators()) {
        out += k * rho.matrix() * k.adjoint();
    }
    return DensityMatrix(out);
}

double lemma_commutation_residual(const DensityMatrix& rho, const DensityMatrix& sigma_incoh,
                                  const IncoherentChannel& ch, double alpha) {
    check_same_dim(rho, sigma_incoh);
    check_alpha(alpha);
    if (!is_diagonal(sigma_incoh.matrix(), 1e-12)) {
        throw std::invalid_argument("lemma_commutation_residual: sigma must be incoherent (diagonal)");
    }
    const DensityMatrix lr = apply_channel(ch.kraus, rho);
    const DensityMatrix ls = apply_channel(ch.kraus, sigma_incoh);
    const DensityMatrix lhs = quantum_add(lr, ls, alpha);
    const DensityMatrix rhs = apply_channel(ch.kraus, quantum_add(rho, sigma_incoh, alpha));
    return (lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace qadd
