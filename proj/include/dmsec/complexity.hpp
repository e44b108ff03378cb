#pragma once

#include <cstdint>
#include <string_view>

namespace dmsec {

// FLOP-count polynomials of the three designs for K groups of T users each,
// N antennas and M eavesdroppers.
enum class FlopsMethod { MaxGrpNsp, Leakage, Bd };

std::string_view method_id(FlopsMethod m);
FlopsMethod parse_method(std::string_view id);
inline constexpr FlopsMethod kAllMethods[] = {FlopsMethod::MaxGrpNsp, FlopsMethod::Leakage, FlopsMethod::Bd};

struct FlopsQuery {
    FlopsMethod method = FlopsMethod::MaxGrpNsp;
    std::int64_t k = 1;
    std::int64_t t = 1;
    std::int64_t n = 2;
    std::int64_t m = 1;

    // All sizes positive and N >= K T + M.
    bool in_domain() const;
};

// Polynomial organized by powers of K. Throws DomainError outside the domain.
std::int64_t flops(const FlopsQuery& q);

// The same count from the polynomial organized by powers of T. Kept as an
// independent transcription; see flops_forms_agree.
std::int64_t flops_t_form(const FlopsQuery& q);

// Both transcriptions evaluated without the N >= KT + M check (sizes must
// still be positive).
std::int64_t flops_polynomial(const FlopsQuery& q);
std::int64_t flops_t_form_polynomial(const FlopsQuery& q);

bool flops_forms_agree(const FlopsQuery& q);

enum class ScalingVariable { K, T, N };

enum class ScalingDomain {
    Antennas,    // both points must satisfy N >= KT + M
    Polynomial,  // the raw polynomial, other sizes held fixed
};

// log(f(scaled) / f(base)) / log(factor) where the chosen variable is
// multiplied by factor.
double scaling_exponent(FlopsMethod method, ScalingVariable variable, const FlopsQuery& base, std::int64_t factor,
                        ScalingDomain domain = ScalingDomain::Antennas);

}  // namespace dmsec
