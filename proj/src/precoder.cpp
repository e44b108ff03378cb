#include "dmsec/precoder.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace dmsec {

namespace {

constexpr double kRankTolerance = 1e-10;

// Gram sum H H^H over a list of blocks.
CMatrix gram(const CMatrix& h) { return h * h.adjoint(); }

// Principal eigenvector of the Hermitian pencil (signal, loaded), i.e. of
// loaded^{-1} signal, without forming the inverse. An infinite load reduces
// the pencil to the ordinary eigenproblem of signal.
CVector principal_generalized(const CMatrix& signal, const CMatrix& loaded, bool identity_pencil) {
    CVector v;
    if (identity_pencil) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(signal);
        v = es.eigenvectors().rightCols<1>();
    } else {
        Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> es(signal, loaded);
        if (es.info() != Eigen::Success) throw ConfigError("generalized eigensolver did not converge");
        v = es.eigenvectors().rightCols<1>();
    }
    v.normalize();
    canonicalize_phase(v);
    return v;
}

}  // namespace

CVector PrecoderSet::effective(int k) const { return blocks.at(k).rowwise().sum(); }

NoiseLoading NoiseLoading::from_profile(const PowerProfile& profile, const NormFactors& factors, int an_dim) {
    const double inf = std::numeric_limits<double>::infinity();
    const double cm = factors.alpha1 * factors.alpha1 * profile.beta1 * profile.beta1 * profile.total_power;
    const double an = factors.alpha2 * factors.alpha2 * profile.beta2 * profile.beta2 * profile.total_power *
                      static_cast<double>(an_dim);
    return {cm > 0.0 ? profile.sigma_d2 / cm : inf, an > 0.0 ? profile.sigma_e2 / an : inf};
}

NullSpace null_space_basis(const CMatrix& h) {
    const Eigen::Index n = h.rows();
    NullSpace out;
    out.columns = h.cols();
    if (h.cols() == 0) {
        out.basis = CMatrix::Identity(n, n);
        return out;
    }

    // Rows of H^H are the constraints; its full right singular basis splits
    // into the row space and the null space.
    Eigen::JacobiSVD<CMatrix> svd(h.adjoint(), Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    const double cutoff = kRankTolerance * (s.size() > 0 ? s(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) ++rank;
    }
    out.rank = rank;
    out.basis = svd.matrixV().rightCols(n - rank);
    return out;
}

void canonicalize_phase(Eigen::Ref<CVector> v) {
    if (v.size() == 0) return;
    Eigen::Index best = 0;
    double best_abs = std::abs(v(0));
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    if (best_abs == 0.0) return;
    v *= std::conj(v(best)) / best_abs;
    v(best) = cplx(best_abs, 0.0);
}

CVector max_grp_precoder(int k, const Channels& ch) {
    const NullSpace ns = null_space_basis(ch.complement(k));
    if (ns.basis.cols() == 0) {
        throw ConfigError("no null space left for group " + std::to_string(k + 1));
    }
    const CMatrix projected = ns.basis.adjoint() * ch.desired.at(k);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram(projected));
    CVector v = ns.basis * es.eigenvectors().rightCols<1>();
    v.normalize();
    canonicalize_phase(v);
    return v;
}

AnProjector nsp_an_projector(const ChannelMatrix& stacked_desired) {
    const NullSpace ns = null_space_basis(stacked_desired);
    if (ns.rank_deficient()) {
        throw ConfigError("desired channels are linearly dependent (coincident desired directions)");
    }
    if (ns.basis.cols() == 0) throw ConfigError("no null space left for artificial noise");
    return {ns.basis};
}

CVector slnr_precoder(int k, const Channels& ch, const NoiseLoading& loading) {
    if (!(loading.desired_load > 0.0)) throw DomainError("SLNR loading must be positive");
    const bool limit = std::isinf(loading.desired_load);
    CMatrix leak;
    if (!limit) {
        const Eigen::Index n = ch.n_antennas();
        leak = gram(ch.complement(k)) + gram(ch.eve) +
               loading.desired_load * CMatrix::Identity(n, n);
    }
    return principal_generalized(gram(ch.desired.at(k)), leak, limit);
}

double slnr_value(const CVector& v, const Channels& ch, const NoiseLoading& loading, int k) {
    const double signal = (ch.desired.at(k).adjoint() * v).squaredNorm();
    const double leak = (ch.complement(k).adjoint() * v).squaredNorm() + (ch.eve.adjoint() * v).squaredNorm() +
                        loading.desired_load * v.squaredNorm();
    return signal / leak;
}

AnProjector anlnr_projector(const Channels& ch, const NoiseLoading& loading, int an_dim) {
    const Eigen::Index n = ch.n_antennas();
    if (an_dim <= 0) throw ConfigError("AN dimension must be positive");
    if (an_dim > n) throw ConfigError("AN dimension exceeds the antenna count");
    if (!(loading.eve_load > 0.0)) throw DomainError("ANLNR loading must be positive");

    const CMatrix eve_gram = gram(ch.eve);
    const CMatrix desired_gram = gram(ch.stacked_desired());

    RVector lambda;
    CMatrix vectors;
    if (std::isinf(loading.eve_load)) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(eve_gram);
        lambda = es.eigenvalues();
        vectors = es.eigenvectors();
    } else {
        const CMatrix loaded = desired_gram + loading.eve_load * CMatrix::Identity(n, n);
        Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> es(eve_gram, loaded);
        if (es.info() != Eigen::Success) throw ConfigError("generalized eigensolver did not converge");
        lambda = es.eigenvalues();
        vectors = es.eigenvectors();
    }

    // Eigenvalues come back ascending; count the strictly positive ones.
    const double top = lambda(n - 1);
    Eigen::Index positive = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (top > 0.0 && lambda(i) > kRankTolerance * top) ++positive;
    }
    const Eigen::Index from_eve = std::min<Eigen::Index>(positive, an_dim);

    CMatrix span(n, an_dim);
    span.leftCols(from_eve) = vectors.rightCols(from_eve).rowwise().reverse();

    const Eigen::Index rest = an_dim - from_eve;
    if (rest > 0) {
        // Zero-eigenvalue block: null(H_e^H). Rank the candidates by the AN
        // power they would leak into the desired groups.
        const NullSpace quiet = null_space_basis(ch.eve);
        if (quiet.basis.cols() < rest) throw ConfigError("AN dimension too large for the eavesdropper layout");
        Eigen::SelfAdjointEigenSolver<CMatrix> es(quiet.basis.adjoint() * desired_gram * quiet.basis);
        span.rightCols(rest) = quiet.basis * es.eigenvectors().leftCols(rest);
    }

    Eigen::HouseholderQR<CMatrix> qr(span);
    CMatrix basis = qr.householderQ() * CMatrix::Identity(n, an_dim);
    return {std::move(basis)};
}

double anlnr_value(const CMatrix& t, const Channels& ch, const NoiseLoading& loading) {
    if (std::isinf(loading.eve_load)) return 0.0;
    const double useful = (ch.eve.adjoint() * t).squaredNorm();
    const double leak = (ch.stacked_desired().adjoint() * t).squaredNorm() + loading.eve_load * t.squaredNorm();
    return useful / leak;
}

CMatrix bd_precoder(int k, const Channels& ch) {
    const NullSpace ns = null_space_basis(ch.complement(k));
    const Eigen::Index modes = ch.desired.at(k).cols();
    if (ns.basis.cols() < modes) {
        throw ConfigError("null space too small for block diagonalization of group " + std::to_string(k + 1));
    }
    const CMatrix projected = ns.basis.adjoint() * ch.desired.at(k);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram(projected));
    CMatrix v = ns.basis * es.eigenvectors().rightCols(modes).rowwise().reverse();
    for (Eigen::Index c = 0; c < modes; ++c) {
        v.col(c).normalize();
        canonicalize_phase(v.col(c));
    }
    v /= std::sqrt(static_cast<double>(modes));
    return v;
}

std::string_view scheme_id(Scheme s) {
    switch (s) {
        case Scheme::MaxGrpNsp: return "max-grp-nsp";
        case Scheme::Leakage: return "leakage";
        case Scheme::Bd: return "bd";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view id) {
    if (id == "max-grp-nsp") return Scheme::MaxGrpNsp;
    if (id == "leakage") return Scheme::Leakage;
    if (id == "bd") return Scheme::Bd;
    throw DomainError("unknown scheme '" + std::string(id) + "'");
}

Design design_scheme(Scheme scheme, const Channels& ch, const PowerProfile& profile) {
    Design d;
    d.scheme = scheme;
    const int groups = ch.group_count();
    const int an_dim = ch.n_antennas() - ch.total_desired();
    if (an_dim <= 0) throw ConfigError("no null space left for artificial noise");

    switch (scheme) {
        case Scheme::MaxGrpNsp:
            for (int k = 0; k < groups; ++k) d.precoders.blocks.emplace_back(max_grp_precoder(k, ch));
            d.an = nsp_an_projector(ch.stacked_desired());
            break;
        case Scheme::Leakage: {
            const NoiseLoading loading =
                NoiseLoading::from_profile(profile, norm_factors(profile, groups, an_dim), an_dim);
            for (int k = 0; k < groups; ++k) d.precoders.blocks.emplace_back(slnr_precoder(k, ch, loading));
            d.an = anlnr_projector(ch, loading, an_dim);
            break;
        }
        case Scheme::Bd:
            for (int k = 0; k < groups; ++k) d.precoders.blocks.push_back(bd_precoder(k, ch));
            d.an = nsp_an_projector(ch.stacked_desired());
            break;
    }
    return d;
}

}  // namespace dmsec
