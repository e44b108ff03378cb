#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <doctest.h>

#include "dmsec/precoder.hpp"
#include "oracles.hpp"

using namespace dmsec;

namespace {

const ArrayConfig kRefArray{16, 0.5};

GroupLayout reference_layout() {
    GroupLayout l;
    l.desired_angles = {{30.0, 45.0}, {120.0, 135.0}};
    l.eavesdropper_angles = {70.0, 95.0};
    return l;
}

NoiseLoading reference_loading(double snr_db) {
    const PowerProfile p = PowerProfile::from_snr(snr_db, 0.9);
    return NoiseLoading::from_profile(p, norm_factors(p, 2, 12), 12);
}

// Directions whose steering vectors are mutually orthogonal on a 16-element
// half-wavelength array: cosines differing by multiples of 1/8.
double angle_for_cos(double c) { return std::acos(c) * 180.0 / std::numbers::pi; }

// Random layouts for property checks: small arrays, distinct directions.
GroupLayout random_layout(std::mt19937_64& rng, int& n_out) {
    std::uniform_int_distribution<int> kd(1, 3), td(1, 3), md(1, 3);
    std::uniform_real_distribution<double> ang(5.0, 175.0);
    GroupLayout l;
    const int k = kd(rng);
    int total = 0;
    std::vector<double> used;
    auto fresh = [&] {
        for (;;) {
            const double a = ang(rng);
            bool ok = true;
            for (double u : used) ok = ok && std::abs(u - a) > 3.0;
            if (ok) {
                used.push_back(a);
                return a;
            }
        }
    };
    for (int g = 0; g < k; ++g) {
        std::vector<double> grp;
        const int t = td(rng);
        for (int i = 0; i < t; ++i) grp.push_back(fresh());
        total += t;
        l.desired_angles.push_back(grp);
    }
    const int m = md(rng);
    for (int i = 0; i < m; ++i) l.eavesdropper_angles.push_back(fresh());
    n_out = std::uniform_int_distribution<int>(total + m + 1, total + m + 8)(rng);
    return l;
}

}  // namespace

TEST_SUITE("precoder-core") {

TEST_CASE("null space of a coordinate column") {
    CMatrix h = CMatrix::Zero(3, 1);
    h(0, 0) = 1.0;
    const NullSpace ns = null_space_basis(h);
    CHECK(ns.basis.cols() == 2);
    CHECK(ns.rank == 1);
    CHECK(!ns.rank_deficient());
    CHECK((ns.basis.adjoint() * ns.basis - CMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK(ns.basis.row(0).norm() < 1e-12);
}

TEST_CASE("null space of the reference complement") {
    const Channels ch = build_channels(reference_layout(), kRefArray);
    const NullSpace ns = null_space_basis(ch.complement(0));
    CHECK(ns.basis.rows() == 16);
    CHECK(ns.basis.cols() == 14);
    CHECK((ch.complement(0).adjoint() * ns.basis).norm() < 1e-10);
}

TEST_CASE("null space projector identity for orthonormal columns") {
    std::mt19937_64 rng(2);
    const CMatrix q = oracle::random_orthonormal(10, 3, rng);
    const NullSpace ns = null_space_basis(q);
    const CMatrix p = ns.basis * ns.basis.adjoint();
    CHECK((p - (CMatrix::Identity(10, 10) - q * q.adjoint())).norm() < 1e-10);
}

TEST_CASE("null space of an empty matrix and of dependent columns") {
    CHECK((null_space_basis(CMatrix(5, 0)).basis - CMatrix::Identity(5, 5)).norm() == 0.0);
    const std::vector<double> dup{50.0, 50.0};
    const NullSpace ns = null_space_basis(channel_matrix(dup, kRefArray));
    CHECK(ns.rank_deficient());
    CHECK(ns.basis.cols() == 15);
}

TEST_CASE("canonical phase") {
    CVector v(3);
    v << cplx(0.1, 0.2), cplx(0.0, -0.9), cplx(0.3, 0.0);
    canonicalize_phase(v);
    CHECK(std::abs(v(1).imag()) < 1e-15);
    CHECK(v(1).real() > 0.0);
    CHECK(std::abs(v(1).real() - 0.9) < 1e-15);
}

TEST_CASE("Max-GRP with one unconstrained user is the steering vector") {
    GroupLayout l;
    l.desired_angles = {{40.0}};
    l.eavesdropper_angles = {100.0};
    const Channels ch = build_channels(l, kRefArray);
    const CVector v = max_grp_precoder(0, ch);
    CHECK(std::abs(std::abs(v.dot(ch.desired[0].col(0))) - 1.0) < 1e-10);
}

TEST_CASE("Max-GRP constraint and optimality at the reference layout") {
    const Channels ch = build_channels(reference_layout(), kRefArray);
    std::mt19937_64 rng(17);
    for (int k = 0; k < 2; ++k) {
        const CVector v = max_grp_precoder(k, ch);
        CHECK(std::abs(v.norm() - 1.0) < 1e-10);
        CHECK((ch.complement(k).adjoint() * v).norm() < 1e-10);
        const double best = (ch.desired[k].adjoint() * v).squaredNorm();
        const CMatrix f = null_space_basis(ch.complement(k)).basis;
        for (int trial = 0; trial < 10000; ++trial) {
            const CVector w = f * oracle::random_unit(f.cols(), rng);
            CHECK((ch.desired[k].adjoint() * w).squaredNorm() <= best * (1 + 1e-12));
        }
    }
}

TEST_CASE("NSP projector for a single broadside user") {
    GroupLayout l;
    l.desired_angles = {{90.0}};
    l.eavesdropper_angles = {30.0};
    const Channels ch = build_channels(l, ArrayConfig{6, 0.5});
    const AnProjector t = nsp_an_projector(ch.stacked_desired());
    CHECK(t.dim() == 5);
    CHECK((CVector::Ones(6).adjoint() * t.basis).norm() < 1e-12);
}

TEST_CASE("NSP projector at the reference layout") {
    const Channels ch = build_channels(reference_layout(), kRefArray);
    const AnProjector t = nsp_an_projector(ch.stacked_desired());
    CHECK(t.dim() == 12);
    CHECK((ch.stacked_desired().adjoint() * t.basis).norm() < 1e-10);
    CHECK((t.basis.adjoint() * t.basis - CMatrix::Identity(12, 12)).norm() < 1e-8);
    const CMatrix p = t.basis * t.basis.adjoint();
    CHECK((p * p - p).norm() < 1e-9);
    CHECK((p - p.adjoint()).norm() < 1e-9);
}

TEST_CASE("NSP rejects dependent desired channels") {
    const std::vector<double> dup{50.0, 50.0};
    CHECK_THROWS_AS(nsp_an_projector(channel_matrix(dup, kRefArray)), ConfigError);
}

TEST_CASE("SLNR with orthogonal channels") {
    GroupLayout l;
    l.desired_angles = {{angle_for_cos(0.5)}, {angle_for_cos(-0.5)}};
    l.eavesdropper_angles = {angle_for_cos(0.0)};
    const Channels ch = build_channels(l, kRefArray);
    CHECK(std::abs(ch.desired[0].col(0).dot(ch.eve.col(0))) < 1e-12);
    CHECK(std::abs(ch.desired[0].col(0).dot(ch.desired[1].col(0))) < 1e-12);

    const NoiseLoading tiny{1e-9, 1e-9};
    const CVector v = slnr_precoder(0, ch, tiny);
    CHECK(std::abs(std::abs(v.dot(ch.desired[0].col(0))) - 1.0) < 1e-8);
    CHECK((ch.eve.adjoint() * v).norm() < 1e-6);
}

TEST_CASE("SLNR optimality and eigenvalue cross-check at the reference layout") {
    const Channels ch = build_channels(reference_layout(), kRefArray);
    std::mt19937_64 rng(23);
    for (double snr : {0.0, 7.0, 14.0}) {
        const NoiseLoading load = reference_loading(snr);
        for (int k = 0; k < 2; ++k) {
            const CVector v = slnr_precoder(k, ch, load);
            CHECK(std::abs(v.norm() - 1.0) < 1e-10);
            const double value = slnr_value(v, ch, load, k);

            const CMatrix num = ch.desired[k] * ch.desired[k].adjoint();
            const CMatrix den = ch.complement(k) * ch.complement(k).adjoint() + ch.eve * ch.eve.adjoint() +
                                load.desired_load * CMatrix::Identity(16, 16);
            CHECK(std::abs(value - oracle::dominant_ratio(num, den)) < 1e-8 * std::max(1.0, value));

            for (int trial = 0; trial < 2000; ++trial) {
                CHECK(slnr_value(oracle::random_unit(16, rng), ch, load, k) <= value * (1 + 1e-12));
            }
        }
    }
}

TEST_CASE("SLNR under large loading tends to the unconstrained principal direction") {
    const Channels ch = build_channels(reference_layout(), kRefArray);
    const CVector v = slnr_precoder(0, ch, NoiseLoading{1e12, 1.0});
    Eigen::SelfAdjointEigenSolver<CMatrix> es(ch.desired[0] * ch.desired[0].adjoint());
    CHECK(std::abs(std::abs(v.dot(es.eigenvectors().col(15))) - 1.0) < 1e-8);
    const CVector w = slnr_precoder(0, ch, NoiseLoading{std::numeric_limits<double>::infinity(), 1.0});
    CHECK(std::abs(std::abs(w.dot(es.eigenvectors().col(15))) - 1.0) < 1e-10);
}

TEST_CASE("SLNR value edge cases") {
    GroupLayout l;
    l.desired_angles = {{angle_for_cos(0.5)}};
    l.eavesdropper_angles = {angle_for_cos(0.0)};
    const Channels ch = build_channels(l, kRefArray);
    const CVector orth = steering_vector(angle_for_cos(-0.5), kRefArray);
    CHECK(slnr_value(orth, ch, NoiseLoading{0.1, 0.1}, 0) < 1e-24);

    // A common unitary applied to every channel and to v changes nothing.
    std::mt19937_64 rng(4);
    const CMatrix u = oracle::random_orthonormal(16, 16, rng);
    const Channels full = build_channels(reference_layout(), kRefArray);
    Channels rotated = full;
    for (auto& b : rotated.desired) b = u * b;
    rotated.eve = u * rotated.eve;
    const CVector v = oracle::random_unit(16, rng);
    const NoiseLoading load = reference_loading(14.0);
    CHECK(std::abs(slnr_value(v, full, load, 1) - slnr_value(u * v, rotated, load, 1)) < 1e-12);
    CHECK(std::abs(slnr_value(v, full, load, 1) - slnr_value(cplx(0.0, 1.0) * v, full, load, 1)) < 1e-14);
    CHECK_THROWS_AS(slnr_precoder(0, full, NoiseLoading{0.0, 1.0}), DomainError);
}

TEST_CASE("ANLNR projector at the reference layout") {
    const Channels ch = build_channels(reference_layout(), kRefArray);
    std::mt19937_64 rng(29);
    for (double snr : {0.0, 7.0, 14.0}) {
        const NoiseLoading load = reference_loading(snr);
        const AnProjector t = anlnr_projector(ch, load, 12);
        CHECK(t.dim() == 12);
        CHECK(std::abs((t.basis.adjoint() * t.basis).trace().real() - 12.0) < 1e-8);
        CHECK((t.basis.adjoint() * t.basis - CMatrix::Identity(12, 12)).norm() < 1e-8);
        const double value = anlnr_value(t.basis, ch, load);
        for (int trial = 0; trial < 300; ++trial) {
            CHECK(anlnr_value(oracle::random_orthonormal(16, 12, rng), ch, load) <= value * (1 + 1e-12));
        }
    }
}

TEST_CASE("ANLNR matches the explicit top eigenvectors when they are non-degenerate") {
    // N = 4, one desired user, three eavesdroppers: all L = 3 generalized
    // eigenvalues are positive, so the top-L subspace is unique.
    GroupLayout l;
    l.desired_angles = {{60.0}};
    l.eavesdropper_angles = {25.0, 100.0, 150.0};
    const ArrayConfig cfg{4, 0.5};
    const Channels ch = build_channels(l, cfg);
    const NoiseLoading load{0.2, 0.3};
    const AnProjector t = anlnr_projector(ch, load, 3);

    const CMatrix num = ch.eve * ch.eve.adjoint();
    const CMatrix den = ch.stacked_desired() * ch.stacked_desired().adjoint() + load.eve_load * CMatrix::Identity(4, 4);
    const CMatrix ref = oracle::top_eigvecs_explicit(num, den, 3);
    CHECK(std::abs(anlnr_value(t.basis, ch, load) - anlnr_value(ref, ch, load)) < 1e-8);
    // Same subspace.
    CHECK((t.basis * t.basis.adjoint() - ref * ref.adjoint()).norm() < 1e-8);
}

TEST_CASE("ANLNR covers an eavesdropper orthogonal to the desired users") {
    GroupLayout l;
    l.desired_angles = {{angle_for_cos(0.5)}, {angle_for_cos(-0.5)}};
    l.eavesdropper_angles = {angle_for_cos(0.0)};
    const Channels ch = build_channels(l, kRefArray);
    const AnProjector t = anlnr_projector(ch, NoiseLoading{1e-9, 1e-9}, 14);
    const CVector he = ch.eve.col(0);
    CHECK((he - t.basis * (t.basis.adjoint() * he)).norm() < 1e-8);
    // Here the leftover columns can avoid the desired users entirely.
    CHECK((ch.stacked_desired().adjoint() * t.basis).norm() < 1e-8);
}

TEST_CASE("ANLNR value edge cases") {
    GroupLayout l;
    l.desired_angles = {{angle_for_cos(0.5)}};
    l.eavesdropper_angles = {angle_for_cos(0.0)};
    const Channels ch = build_channels(l, kRefArray);
    const CMatrix t = null_space_basis(ch.eve).basis.leftCols(4);
    CHECK(anlnr_value(t, ch, NoiseLoading{0.1, 0.1}) < 1e-24);

    // Large loading: value approaches tr(T^H He He^H T) / (load L).
    const Channels full = build_channels(reference_layout(), kRefArray);
    std::mt19937_64 rng(6);
    const CMatrix r = oracle::random_orthonormal(16, 12, rng);
    const double big = 1e9;
    const double limit = (full.eve.adjoint() * r).squaredNorm() / (big * 12.0);
    CHECK(std::abs(anlnr_value(r, full, NoiseLoading{1.0, big}) - limit) < 1e-6 * limit);
    CHECK(anlnr_value(r, full, NoiseLoading{1.0, std::numeric_limits<double>::infinity()}) == 0.0);
    CHECK_THROWS_AS(anlnr_projector(full, NoiseLoading{1.0, 1.0}, 0), ConfigError);
    CHECK_THROWS_AS(anlnr_projector(full, NoiseLoading{1.0, 1.0}, 17), ConfigError);
}

TEST_CASE("BD precoder") {
    const Channels ch = build_channels(reference_layout(), kRefArray);
    for (int k = 0; k < 2; ++k) {
        const CMatrix v = bd_precoder(k, ch);
        CHECK(v.cols() == 2);
        CHECK(std::abs(v.norm() - 1.0) < 1e-10);
        CHECK((ch.complement(k).adjoint() * v).norm() < 1e-10);
    }

    GroupLayout single;
    single.desired_angles = {{30.0}, {120.0, 135.0}};
    single.eavesdropper_angles = {70.0};
    const Channels c1 = build_channels(single, kRefArray);
    const CMatrix bd = bd_precoder(0, c1);
    const CVector grp = max_grp_precoder(0, c1);
    CHECK(bd.cols() == 1);
    CHECK(std::abs(std::abs(bd.col(0).dot(grp)) - 1.0) < 1e-10);
}

TEST_CASE("scheme ids round-trip") {
    for (Scheme s : kAllSchemes) CHECK(parse_scheme(scheme_id(s)) == s);
    CHECK_THROWS(parse_scheme("zf"));
}

TEST_CASE("designs are deterministic and satisfy their contracts on random layouts") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 0;
        const GroupLayout l = random_layout(rng, n);
        const ArrayConfig cfg{n, 0.5};
        const Channels ch = build_channels(l, cfg);
        const PowerProfile p = PowerProfile::from_snr(10.0, 0.8);
        for (Scheme s : kAllSchemes) {
            const Design a = design_scheme(s, ch, p);
            const Design b = design_scheme(s, ch, p);
            CHECK(a.an.dim() == n - l.total_desired());
            CHECK((a.an.basis - b.an.basis).norm() == 0.0);
            CHECK((a.an.basis.adjoint() * a.an.basis - CMatrix::Identity(a.an.dim(), a.an.dim())).norm() < 1e-8);
            for (int k = 0; k < l.group_count(); ++k) {
                CHECK((a.precoders.blocks[k] - b.precoders.blocks[k]).norm() == 0.0);
                CHECK(std::abs(a.precoders.blocks[k].norm() - 1.0) < 1e-10);
                if (s != Scheme::Leakage) {
                    CHECK((ch.complement(k).adjoint() * a.precoders.blocks[k]).norm() < 1e-9);
                }
            }
            if (s != Scheme::Leakage) CHECK((ch.stacked_desired().adjoint() * a.an.basis).norm() < 1e-9);
        }
    }
}

}
