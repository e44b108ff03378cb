#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dmsec/array_channel.hpp"
#include "dmsec/signal_chain.hpp"
#include "dmsec/types.hpp"

namespace dmsec {

// One precoder block per group. Max-GRP and Max-SLNR blocks are single unit
// columns; BD blocks are N x T_k with unit Frobenius norm and carry the
// group's symbol identically on every column.
struct PrecoderSet {
    std::vector<CMatrix> blocks;

    int group_count() const { return static_cast<int>(blocks.size()); }
    // V_k 1, the vector the group's symbol actually rides on.
    CVector effective(int k) const;
};

// Orthonormal basis of the AN subspace, N x L.
struct AnProjector {
    CMatrix basis;

    Eigen::Index dim() const { return basis.cols(); }
};

// Diagonal-loading ratios of the two leakage criteria.
struct NoiseLoading {
    double desired_load = 1.0;  // sigma_d^2 / (alpha1^2 beta1^2 P_s)
    double eve_load = 1.0;      // sigma_e^2 / (alpha2^2 beta2^2 P_s L); +inf when beta2 = 0

    static NoiseLoading from_profile(const PowerProfile& profile, const NormFactors& factors, int an_dim);
};

struct NullSpace {
    CMatrix basis;       // N x (N - rank), orthonormal columns
    Eigen::Index rank = 0;
    Eigen::Index columns = 0;  // column count of the input

    bool rank_deficient() const { return rank < columns; }
};

// Right singular vectors of H^H belonging to zero singular values, with the
// relative threshold 1e-10 * sigma_max. An input without columns yields I_N.
NullSpace null_space_basis(const CMatrix& h);

// Scales v so that its largest-modulus entry (first one on ties) is real positive.
void canonicalize_phase(Eigen::Ref<CVector> v);

CVector max_grp_precoder(int k, const Channels& ch);

AnProjector nsp_an_projector(const ChannelMatrix& stacked_desired);

CVector slnr_precoder(int k, const Channels& ch, const NoiseLoading& loading);

double slnr_value(const CVector& v, const Channels& ch, const NoiseLoading& loading, int k);

// Columns span the top-L generalized eigenvectors of (H_e H_e^H, sum_i H_i H_i^H + eve_load I).
// Once the eavesdropper subspace is exhausted the remaining eigenvalues are
// zero; those columns are taken from null(H_e^H) with the least desired-group
// leakage.
AnProjector anlnr_projector(const Channels& ch, const NoiseLoading& loading, int an_dim);

double anlnr_value(const CMatrix& t, const Channels& ch, const NoiseLoading& loading);

CMatrix bd_precoder(int k, const Channels& ch);

enum class Scheme { MaxGrpNsp, Leakage, Bd };

std::string_view scheme_id(Scheme s);
Scheme parse_scheme(std::string_view id);
inline constexpr Scheme kAllSchemes[] = {Scheme::MaxGrpNsp, Scheme::Leakage, Scheme::Bd};

struct Design {
    Scheme scheme = Scheme::MaxGrpNsp;
    PrecoderSet precoders;
    AnProjector an;
};

// Builds the precoders and AN projector of one scheme. The leakage scheme
// needs the power profile for its loading terms; the other two ignore it.
Design design_scheme(Scheme scheme, const Channels& ch, const PowerProfile& profile);

}  // namespace dmsec
