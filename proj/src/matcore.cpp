#include "qadd/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace qadd {

std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer on the combined word
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

double max_abs(const Eigen::MatrixXcd& m) {
    return m.cwiseAbs().maxCoeff();
}

void require_square(const Eigen::MatrixXcd& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square");
    }
}

std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

Eigen::MatrixXcd ginibre(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = cxd(re, im);
        }
    }
    return g;
}

}  // namespace

DensityMatrix::DensityMatrix(const Eigen::MatrixXcd& m) {
    require_square(m, "DensityMatrix");
    const double asym = max_abs(m - m.adjoint());
    if (asym > kHermTol) {
        throw std::invalid_argument("DensityMatrix: input not Hermitian (max |M - M^dag| = " +
                                    std::to_string(asym) + ")");
    }
    Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint().eval());
    const double tr = sym.trace().real();
    if (std::abs(tr - 1.0) > kHermTol) {
        throw std::invalid_argument("DensityMatrix: trace differs from 1 by " +
                                    std::to_string(std::abs(tr - 1.0)));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
    const Eigen::VectorXd& ev = es.eigenvalues();
    if (ev(0) < -kHermTol) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(ev(0)));
    }
    if (ev(0) < 0.0) {
        // clip the tiny negatives and renormalize
        Eigen::VectorXd clipped = ev.cwiseMax(0.0);
        clipped /= clipped.sum();
        mat_ = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
        mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
    } else {
        mat_ = std::move(sym);
    }
}

HermitianObservable::HermitianObservable(const Eigen::MatrixXcd& m) {
    require_square(m, "HermitianObservable");
    const double asym = max_abs(m - m.adjoint());
    if (asym > kHermTol) {
        throw std::invalid_argument("HermitianObservable: input not Hermitian");
    }
    mat_ = 0.5 * (m + m.adjoint().eval());
}

Eigen::MatrixXcd tensor(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Eigen::MatrixXcd partial_trace_second(const Eigen::MatrixXcd& m, int d) {
    require_square(m, "partial_trace_second");
    if (m.rows() != static_cast<Eigen::Index>(d) * d) {
        throw std::invalid_argument("partial_trace_second: input dimension is not d^2");
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            cxd s = 0.0;
            for (int k = 0; k < d; ++k) {
                s += m(i * d + k, j * d + k);
            }
            out(i, j) = s;
        }
    }
    return out;
}

DensityMatrix direct_sum(const DensityMatrix& a, const DensityMatrix& b, double p) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("direct_sum: weight outside [0,1]");
    }
    const int da = a.dim();
    const int db = b.dim();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(da + db, da + db);
    out.topLeftCorner(da, da) = p * a.matrix();
    out.bottomRightCorner(db, db) = (1.0 - p) * b.matrix();
    return DensityMatrix(out);
}

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    require_square(a, "commutator");
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("commutator: dimension mismatch");
    }
    return a * b - b * a;
}

EigenDecomposition hermitian_eig(const Eigen::MatrixXcd& m) {
    require_square(m, "hermitian_eig");
    if (max_abs(m - m.adjoint()) > 1e-8) {
        throw std::invalid_argument("hermitian_eig: input not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint().eval()));
    return EigenDecomposition{es.eigenvalues(), es.eigenvectors()};
}

Eigen::MatrixXcd matrix_log(const Eigen::MatrixXcd& m, double clip_eps, int* clip_events) {
    EigenDecomposition ed = hermitian_eig(m);
    int clips = 0;
    Eigen::VectorXd logs(ed.eigenvalues.size());
    for (Eigen::Index i = 0; i < ed.eigenvalues.size(); ++i) {
        double lam = ed.eigenvalues(i);
        if (lam < clip_eps) {
            lam = clip_eps;
            ++clips;
        }
        logs(i) = std::log(lam);
    }
    if (clip_events != nullptr) {
        *clip_events = clips;
    }
    Eigen::MatrixXcd out =
        ed.eigenvectors * logs.asDiagonal() * ed.eigenvectors.adjoint();
    return 0.5 * (out + out.adjoint().eval());
}

double trace_norm(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().sum();
}

StateKind state_kind_from_string(const std::string& s) {
    if (s == "haar" || s == "pure_haar") return StateKind::pure_haar;
    if (s == "ginibre" || s == "ginibre_mixed") return StateKind::ginibre_mixed;
    if (s == "diagonal") return StateKind::diagonal;
    throw std::invalid_argument("unknown state kind: " + s);
}

std::string to_string(StateKind k) {
    switch (k) {
        case StateKind::pure_haar: return "pure_haar";
        case StateKind::ginibre_mixed: return "ginibre_mixed";
        case StateKind::diagonal: return "diagonal";
    }
    return "?";
}

DensityMatrix random_density(int d, StateKind kind, std::uint64_t seed) {
    if (d < 2) {
        throw std::invalid_argument("random_density: dimension must be >= 2");
    }
    auto rng = make_engine(seed);
    switch (kind) {
        case StateKind::pure_haar: {
            Eigen::VectorXcd v = ginibre(d, 1, rng).col(0);
            v /= v.norm();
            return DensityMatrix(v * v.adjoint());
        }
        case StateKind::ginibre_mixed: {
            Eigen::MatrixXcd g = ginibre(d, d, rng);
            Eigen::MatrixXcd w = g * g.adjoint();
            return DensityMatrix(w / w.trace().real());
        }
        case StateKind::diagonal: {
            std::exponential_distribution<double> ex(1.0);
            Eigen::VectorXd w(d);
            for (int i = 0; i < d; ++i) w(i) = ex(rng);
            w /= w.sum();
            Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
            out.diagonal() = w.cast<cxd>();
            return DensityMatrix(out);
        }
    }
    throw std::logic_error("random_density: unreachable");
}

Eigen::MatrixXcd haar_unitary(int d, std::uint64_t seed) {
    if (d < 1) {
        throw std::invalid_argument("haar_unitary: dimension must be >= 1");
    }
    auto rng = make_engine(seed);
    Eigen::MatrixXcd g = ginibre(d, d, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix the phase ambiguity of QR so the distribution is Haar
    for (int i = 0; i < d; ++i) {
        const cxd rii = r(i, i);
        q.col(i) *= (std::abs(rii) == 0.0) ? cxd(1.0, 0.0) : rii / std::abs(rii);
    }
    return q;
}

}  // namespace qadd
