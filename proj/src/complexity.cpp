#include "dmsec/complexity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dmsec/types.hpp"

namespace dmsec {

namespace {

using wide = __int128;

std::int64_t narrow(wide v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw DomainError("FLOP count overflows 64 bits");
    }
    return static_cast<std::int64_t>(v);
}

void require_positive(const FlopsQuery& q) {
    if (q.k < 1 || q.t < 1 || q.n < 1 || q.m < 1) throw DomainError("K, T, N and M must be positive");
}

wide k_form(const FlopsQuery& q) {
    const wide K = q.k, T = q.t, N = q.n, M = q.m;
    switch (q.method) {
        case FlopsMethod::MaxGrpNsp:
            return (7 * T * T * N + 3 * T * T * T) * K * K +
                   (-12 * T * T - 4 * T * N * N - 3 * T * T * T - N * T) * K +
                   (7 * T * T * N + 7 * T * N * N + 2 * N * N * N + T * T * T + N * N + N * T);
        case FlopsMethod::Leakage:
            return 2 * T * N * N * K + (3 * M * N * N + T * N * N + 4 * N * N * N);
        case FlopsMethod::Bd:
            // The constant group is printed as "(+T^2 M - T N + ...)"; the
            // leading sign is read as +T^2 M.
            return 3 * T * T * N * K * K +
                   (T * T * T - T * T * N + M * N * T + T * N - M * M * T - 2 * N * N * T) * K +
                   (-T * T * T + 2 * M * M * N - M * N * T) + (T * T * M - T * N + M * N + M * N * N + N * N * N);
    }
    return 0;
}

wide t_form(const FlopsQuery& q) {
    const wide K = q.k, T = q.t, N = q.n, M = q.m;
    switch (q.method) {
        case FlopsMethod::MaxGrpNsp:
            return (3 * K * K - 3 * K + 1) * T * T * T + (7 * K * K * N - 12 * K * N + 7 * N) * T * T +
                   (7 * N * N - 4 * K * N * N + N - N * K) * T + (N * N + 2 * N * N * N);
        case FlopsMethod::Leakage:
            return (2 * K * N * N + N * N) * T + (3 * M * N * N + 4 * N * N * N);
        case FlopsMethod::Bd:
            return (K - 1) * T * T * T + (3 * K * K * N - K * N + M) * T * T +
                   (M * N * K - M * N + K * N - N - M * M * K - 2 * N * N * K) * T +
                   (2 * M * M * N + M * N + M * N * N + N * N * N);
    }
    return 0;
}

FlopsQuery scaled(FlopsQuery q, ScalingVariable v, std::int64_t factor) {
    switch (v) {
        case ScalingVariable::K: q.k *= factor; break;
        case ScalingVariable::T: q.t *= factor; break;
        case ScalingVariable::N: q.n *= factor; break;
    }
    return q;
}

}  // namespace

std::string_view method_id(FlopsMethod m) {
    switch (m) {
        case FlopsMethod::MaxGrpNsp: return "max-grp-nsp";
        case FlopsMethod::Leakage: return "leakage";
        case FlopsMethod::Bd: return "bd";
    }
    return "unknown";
}

FlopsMethod parse_method(std::string_view id) {
    if (id == "max-grp-nsp") return FlopsMethod::MaxGrpNsp;
    if (id == "leakage") return FlopsMethod::Leakage;
    if (id == "bd") return FlopsMethod::Bd;
    throw DomainError("unknown method '" + std::string(id) + "'");
}

bool FlopsQuery::in_domain() const { return k >= 1 && t >= 1 && n >= 1 && m >= 1 && n >= k * t + m; }

std::int64_t flops_polynomial(const FlopsQuery& q) {
    require_positive(q);
    return narrow(k_form(q));
}

std::int64_t flops_t_form_polynomial(const FlopsQuery& q) {
    require_positive(q);
    return narrow(t_form(q));
}

std::int64_t flops(const FlopsQuery& q) {
    if (!q.in_domain()) {
        throw DomainError("FLOP model requires positive sizes with N >= K*T + M (K=" + std::to_string(q.k) +
                          ", T=" + std::to_string(q.t) + ", N=" + std::to_string(q.n) + ", M=" + std::to_string(q.m) +
                          ")");
    }
    return flops_polynomial(q);
}

std::int64_t flops_t_form(const FlopsQuery& q) {
    if (!q.in_domain()) throw DomainError("FLOP model requires positive sizes with N >= K*T + M");
    return flops_t_form_polynomial(q);
}

bool flops_forms_agree(const FlopsQuery& q) { return flops_polynomial(q) == flops_t_form_polynomial(q); }

double scaling_exponent(FlopsMethod method, ScalingVariable variable, const FlopsQuery& base, std::int64_t factor,
                        ScalingDomain domain) {
    if (factor < 2) throw DomainError("scaling factor must be >= 2");
    FlopsQuery lo = base;
    lo.method = method;
    const FlopsQuery hi = scaled(lo, variable, factor);

    const auto eval = [domain](const FlopsQuery& q) {
        return domain == ScalingDomain::Antennas ? flops(q) : flops_polynomial(q);
    };
    const std::int64_t f_lo = eval(lo);
    const std::int64_t f_hi = eval(hi);
    if (f_lo <= 0 || f_hi <= 0) throw DomainError("FLOP counts must be positive to take a log ratio");
    return std::log(static_cast<double>(f_hi) / static_cast<double>(f_lo)) / std::log(static_cast<double>(factor));
}

}  // namespace dmsec
