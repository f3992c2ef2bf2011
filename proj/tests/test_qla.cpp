#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qseal/qla.hpp"
#include "qseal/seal.hpp"

using namespace qseal;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

void expect_near(Complex a, Complex b, double eps = 1e-12) {
    EXPECT_NEAR(a.real(), b.real(), eps);
    EXPECT_NEAR(a.imag(), b.imag(), eps);
}

}  // namespace

TEST(StateVector, RejectsUnnormalizedAndNonFinite) {
    EXPECT_THROW(StateVector({1.0, 1.0}), InvalidStateError);
    EXPECT_THROW(StateVector({Complex{NAN, 0.0}, 0.0}), InvalidStateError);
    EXPECT_THROW(StateVector(Vector{}), DimensionError);
    EXPECT_NO_THROW(StateVector::normalize({3.0, 4.0}));
    EXPECT_THROW(StateVector::normalize({0.0, 0.0}), InvalidStateError);
}

TEST(Tensor, ComputationalBasis) {
    const auto s = tensor(mub::zero(), mub::zero());
    ASSERT_EQ(s.dim(), 4u);
    expect_near(s[0], 1.0);
    for (int i = 1; i < 4; ++i) expect_near(s[i], 0.0);
}

TEST(Tensor, ZeroZeroYZero) {
    // |0>|0_y>|0> = (|000> + i|010>)/sqrt2
    const auto s = tensor(mub::zero(), mub::zero_y(), mub::zero());
    ASSERT_EQ(s.dim(), 8u);
    expect_near(s[0], kS);
    expect_near(s[2], Complex{0.0, kS});
    for (int i : {1, 3, 4, 5, 6, 7}) expect_near(s[i], 0.0);
}

TEST(Tensor, IdentityOperators) {
    const auto i4 = tensor(Operator::identity(2), Operator::identity(2));
    EXPECT_EQ(max_abs_diff(i4, Operator::identity(4)), 0.0);
}

TEST(Tensor, OnQubitMatchesExplicitKron) {
    Operator x(2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    const auto lifted = on_qubit(x, 3, 1);
    const auto direct = tensor(Operator::identity(2), x, Operator::identity(2));
    EXPECT_EQ(max_abs_diff(lifted, direct), 0.0);
}

TEST(Inner, Examples) {
    expect_near(inner(mub::zero(), mub::zero()), 1.0);
    expect_near(inner(mub::zero(), mub::one()), 0.0);
    expect_near(inner(mub::zero(), mub::zero_x()), kS);
    EXPECT_THROW(inner(mub::zero(), StateVector::basis(4, 0)), DimensionError);
}

TEST(Inner, ConjugateLinearInFirstArgument) {
    // <1|0_y> = i/sqrt2 and <0_y|1> = -i/sqrt2
    expect_near(inner(mub::one(), mub::zero_y()), Complex{0.0, kS});
    expect_near(inner(mub::zero_y(), mub::one()), Complex{0.0, -kS});
}

TEST(OrthonormalBasis, TripletZeroSubspace) {
    std::vector<StateVector> v{StateVector::basis(8, 0), StateVector::basis(8, 1), StateVector::basis(8, 2),
                               StateVector::basis(8, 4)};
    const auto b = orthonormal_basis(v);
    EXPECT_EQ(b.size(), 4u);
    EXPECT_LE(orthonormality_defect(b), 1e-12);
}

TEST(OrthonormalBasis, DuplicateCollapses) {
    std::vector<StateVector> v{mub::zero(), mub::zero()};
    const auto b = orthonormal_basis(v);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_NEAR(fidelity(b[0], mub::zero()), 1.0, 1e-12);
}

TEST(OrthonormalBasis, ZeroAndPlusSpanQubit) {
    std::vector<StateVector> v{mub::zero(), mub::zero_x()};
    const auto b = orthonormal_basis(v);
    ASSERT_EQ(b.size(), 2u);
    // Hand Gram-Schmidt: {|0>, |1>} up to phase.
    EXPECT_NEAR(fidelity(b[0], mub::zero()), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(b[1], mub::one()), 1.0, 1e-12);
}

TEST(OrthonormalBasis, EmptyInput) {
    std::vector<StateVector> v;
    EXPECT_THROW(orthonormal_basis(v), EmptyFamilyError);
}

// Every input must reconstruct from the returned basis: residual of
// v - sum_k <e_k|v> e_k computed directly.
TEST(OrthonormalBasis, SpanPropertyRandomFamilies) {
    RandomStream rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t dim = 1 + rng.below(8);
        const std::size_t rank = 1 + rng.below(dim);
        const std::size_t count = 1 + rng.below(10);
        const auto frame = random_orthonormal_basis(dim, rng);
        std::vector<StateVector> vecs;
        for (std::size_t c = 0; c < count; ++c) {
            Vector v(dim);
            for (std::size_t j = 0; j < rank; ++j) {
                const Complex w{rng.normal(), rng.normal()};
                for (std::size_t i = 0; i < dim; ++i) v[i] += w * frame[j][i];
            }
            vecs.push_back(StateVector::normalize(v));
        }
        const auto basis = orthonormal_basis(vecs, 1e-8);
        EXPECT_LE(basis.size(), rank);
        EXPECT_LE(orthonormality_defect(basis), 1e-10);
        for (const auto& v : vecs) {
            Vector r = v.vector();
            for (const auto& e : basis) {
                const Complex c = inner(e, v);
                for (std::size_t i = 0; i < dim; ++i) r[i] -= c * e[i];
            }
            double res = 0.0;
            for (const auto& z : r) res += std::norm(z);
            EXPECT_LE(std::sqrt(res), 1e-9);
        }
    }
}

TEST(ProjectorOnto, TripletZeroProjector) {
    std::vector<StateVector> b{StateVector::basis(8, 0), StateVector::basis(8, 1), StateVector::basis(8, 2),
                               StateVector::basis(8, 4)};
    const auto p = projector_onto(b);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            const double expect = (i == j && (i == 0 || i == 1 || i == 2 || i == 4)) ? 1.0 : 0.0;
            expect_near(p(i, j), expect, 0.0);
        }
    EXPECT_TRUE(p.is_projector());
    EXPECT_NEAR(p.trace().real(), 4.0, 1e-8);
}

TEST(ProjectorOnto, Examples) {
    std::vector<StateVector> z{mub::zero()};
    const auto pz = projector_onto(z);
    expect_near(pz(0, 0), 1.0);
    expect_near(pz(1, 1), 0.0);
    expect_near(pz(0, 1), 0.0);

    std::vector<StateVector> x{mub::zero_x()};
    const auto px = projector_onto(x);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) expect_near(px(i, j), 0.5);
}

TEST(ProjectorOnto, RejectsNonOrthonormal) {
    std::vector<StateVector> v{mub::zero(), mub::zero_x()};
    EXPECT_THROW(projector_onto(v), NotOrthonormalError);
}

TEST(ProjectorOnto, AlgebraOnRandomSubspaces) {
    RandomStream rng(5);
    for (int t = 0; t < 50; ++t) {
        const std::size_t dim = 2 + rng.below(7);
        auto frame = random_orthonormal_basis(dim, rng);
        frame.erase(frame.begin() + static_cast<long>(1 + rng.below(dim)), frame.end());
        const auto p = projector_onto(frame);
        EXPECT_LE(max_abs_diff(p * p, p), 1e-10);
        EXPECT_LE(max_abs_diff(p, p.adjoint()), 1e-10);
        EXPECT_NEAR(p.trace().real(), static_cast<double>(frame.size()), 1e-8);
    }
}

TEST(BornSample, PlusInZBasis) {
    std::vector<Operator> proj{Operator::outer(mub::zero(), mub::zero()), Operator::outer(mub::one(), mub::one())};
    const auto probs = born_probabilities(mub::zero_x(), proj);
    EXPECT_NEAR(probs[0], 0.5, 1e-12);
    EXPECT_NEAR(probs[1], 0.5, 1e-12);
    RandomStream rng(1);
    int zeros = 0;
    for (int i = 0; i < 2000; ++i) {
        auto r = born_sample(mub::zero_x(), proj, rng);
        EXPECT_NEAR(fidelity(r.post, r.outcome == 0 ? mub::zero() : mub::one()), 1.0, 1e-12);
        zeros += r.outcome == 0;
    }
    EXPECT_NEAR(zeros / 2000.0, 0.5, 3.0 * std::sqrt(0.25 / 2000.0));
}

TEST(BornSample, EigenstateIsDeterministic) {
    RandomStream rng(2);
    StateVector s = StateVector::basis(8, 0);
    for (std::size_t q = 0; q < 3; ++q) {
        auto r = born_sample(s, z_measurement(q), rng);
        EXPECT_EQ(r.outcome, 0u);
        EXPECT_NEAR(r.probability, 1.0, 1e-15);
        EXPECT_NEAR(fidelity(r.post, s), 1.0, 1e-15);
        s = r.post;
    }
}

TEST(BornSample, TripletBitProjectorsDistinguishPerfectly) {
    std::array<double, 8> d0{1, 1, 1, 0, 1, 0, 0, 0}, d1{0, 0, 0, 1, 0, 1, 1, 1};
    std::vector<Operator> proj{Operator::diagonal(d0), Operator::diagonal(d1)};
    const auto psi = tensor(mub::zero(), mub::zero_y(), mub::zero());
    RandomStream rng(3);
    for (int i = 0; i < 100; ++i) {
        auto r = born_sample(psi, proj, rng);
        EXPECT_EQ(r.outcome, 0u);
        EXPECT_NEAR(fidelity(r.post, psi), 1.0, 1e-12);
    }
}

TEST(BornSample, IncompleteSetRejected) {
    RandomStream rng(4);
    std::vector<Operator> proj{Operator::outer(mub::zero(), mub::zero())};
    EXPECT_THROW(born_sample(mub::zero(), proj, rng), CompletenessError);
    std::vector<Operator> overlapping{Operator::outer(mub::zero(), mub::zero()),
                                      Operator::outer(mub::zero_x(), mub::zero_x())};
    EXPECT_THROW(born_sample(mub::zero(), overlapping, rng), CompletenessError);
}

TEST(BornSample, SameSeedSameOutcomes) {
    std::vector<Operator> proj{Operator::outer(mub::zero(), mub::zero()), Operator::outer(mub::one(), mub::one())};
    RandomStream a(99), b(99);
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(born_sample(mub::zero_y(), proj, a).outcome, born_sample(mub::zero_y(), proj, b).outcome);
}

TEST(BornSample, ProbabilitiesSumToOneOnRandomStates) {
    RandomStream rng(8);
    for (int t = 0; t < 100; ++t) {
        const std::size_t dim = 2 + rng.below(7);
        const auto frame = random_orthonormal_basis(dim, rng);
        const std::size_t cut = 1 + rng.below(dim - 1);
        std::vector<StateVector> a(frame.begin(), frame.begin() + static_cast<long>(cut));
        std::vector<StateVector> b(frame.begin() + static_cast<long>(cut), frame.end());
        std::vector<Operator> proj{projector_onto(a), projector_onto(b)};
        const auto p = born_probabilities(random_state(dim, rng), proj);
        EXPECT_NEAR(p[0] + p[1], 1.0, 1e-10);
    }
}

TEST(Lueders, Examples) {
    const auto p0 = Operator::outer(mub::zero(), mub::zero());

    auto r = lueders_update(DensityMatrix::pure(mub::zero()), p0);
    EXPECT_NEAR(r.probability, 1.0, 1e-12);
    EXPECT_LE(max_abs_diff(r.post.op(), p0), 1e-12);

    r = lueders_update(DensityMatrix::pure(mub::zero_x()), p0);
    EXPECT_NEAR(r.probability, 0.5, 1e-12);
    EXPECT_LE(max_abs_diff(r.post.op(), p0), 1e-12);

    std::array<double, 8> d0{1, 1, 1, 0, 1, 0, 0, 0};
    const auto psi = tensor(mub::zero(), mub::zero_y(), mub::zero());
    const auto rho = DensityMatrix::pure(psi);
    r = lueders_update(rho, Operator::diagonal(d0));
    EXPECT_NEAR(r.probability, 1.0, 1e-12);
    EXPECT_LE(max_abs_diff(r.post.op(), rho.op()), 1e-12);
}

TEST(Lueders, NullOutcome) {
    EXPECT_THROW(lueders_update(DensityMatrix::pure(mub::zero()), Operator::outer(mub::one(), mub::one())),
                 NullOutcomeError);
}

TEST(Lueders, Idempotent) {
    RandomStream rng(21);
    for (int t = 0; t < 50; ++t) {
        const std::size_t dim = 2 + rng.below(7);
        auto frame = random_orthonormal_basis(dim, rng);
        frame.erase(frame.begin() + static_cast<long>(1 + rng.below(dim)), frame.end());
        const auto p = projector_onto(frame);
        const auto rho = DensityMatrix::pure(random_state(dim, rng));
        const auto once = lueders_update(rho, p);
        const auto twice = lueders_update(once.post, p);
        EXPECT_NEAR(twice.probability, 1.0, 1e-10);
        EXPECT_LE(max_abs_diff(once.post.op(), twice.post.op()), 1e-10);
    }
}

TEST(DensityMatrix, Validation) {
    Operator bad(2);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix{bad}, InvalidStateError);
    Operator half(2);
    half(0, 0) = 0.5;
    EXPECT_THROW(DensityMatrix{half}, InvalidStateError);
    Operator mixed = Operator::identity(2) * 0.5;
    EXPECT_NO_THROW(DensityMatrix{mixed});
}

TEST(Psd, CholeskyCheck) {
    EXPECT_TRUE(is_psd(Operator::identity(3)));
    EXPECT_TRUE(is_psd(Operator(3)));
    EXPECT_TRUE(is_psd(Operator::outer(mub::zero_y(), mub::zero_y())));
    Operator neg = Operator::identity(2);
    neg(1, 1) = -1e-6;
    EXPECT_FALSE(is_psd(neg));
    neg(1, 1) = -1e-10;
    EXPECT_TRUE(is_psd(neg));
}

TEST(SplitProduct, FactorsProductsOnly) {
    const auto a = mub::zero_y(), b = mub::one_x();
    const auto f = split_product(kron(a.amps(), b.amps()), 2, 2);
    ASSERT_TRUE(f.has_value());
    EXPECT_NEAR(fidelity(f->first, a), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(f->second, b), 1.0, 1e-12);
    const Vector bell{kS, 0.0, 0.0, kS};
    EXPECT_FALSE(split_product(bell, 2, 2).has_value());
}

TEST(ReducedQubit, ProductState) {
    const auto s = tensor(mub::zero(), mub::one_y(), mub::one());
    const auto r = reduced_qubit(s, 3, 1);
    EXPECT_LE(max_abs_diff(r.op(), Operator::outer(mub::one_y(), mub::one_y())), 1e-12);
}
