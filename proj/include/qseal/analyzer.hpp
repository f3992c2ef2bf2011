#pragma once

// Analysis of arbitrary binary encoding families {|psi^(b)_l>}.
//
// If some binary POVM reads the bit with zero error, the spans H0 and H1 of
// the two families are orthogonal, the POVM elements must be the orthogonal
// projectors onto them, and the Lueders measurement with those projectors
// reads the bit without disturbing any family state. This header checks
// readability, computes the span decomposition with its orthogonality
// certificate, and synthesizes that non-disturbing reader together with a
// unitary that rewrites the (padded) space as  C^2 (x) H0, logical bit first.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qseal/errors.hpp"
#include "qseal/qla.hpp"
#include "qseal/random.hpp"
#include "qseal/seal.hpp"

namespace qseal {

struct EncodingFamilies {
    std::size_t dim = 0;
    std::vector<StateVector> family0;
    std::vector<StateVector> family1;

    void validate() const {
        if (dim == 0) throw DimensionError("families: dim must be positive");
        if (family0.empty() || family1.empty()) throw EmptyFamilyError("families: both families must be nonempty");
        for (const auto* fam : {&family0, &family1})
            for (const auto& s : *fam)
                if (s.dim() != dim) throw DimensionError("families: state dimension does not match dim");
    }

    const std::vector<StateVector>& family(Bit b) const { return b ? family1 : family0; }
};

struct BinaryPovm {
    Operator p0;
    Operator p1;

    void validate() const {
        if (p0.dim() != p1.dim()) throw DimensionError("povm: element dimensions differ");
        if (!is_psd(p0, tol::derived) || !is_psd(p1, tol::derived))
            throw InvalidStateError("povm: elements must be positive semidefinite");
        if (max_abs_diff(p0 + p1, Operator::identity(p0.dim())) > tol::exact)
            throw CompletenessError("povm: elements do not sum to the identity");
    }

    const Operator& element(Bit b) const { return b ? p1 : p0; }
};

/// max over b, l, b' of |<psi^(b)_l| P^(b') |psi^(b)_l> - delta_bb'|.
/// Zero (within 1e-10) means the POVM reads every family state perfectly.
inline double check_perfect_readability(const EncodingFamilies& families, const BinaryPovm& povm) {
    families.validate();
    if (povm.p0.dim() != families.dim || povm.p1.dim() != families.dim)
        throw DimensionError("check_perfect_readability: povm and family dimensions differ");
    double worst = 0.0;
    for (Bit b = 0; b < 2; ++b)
        for (const auto& psi : families.family(b))
            for (Bit b2 = 0; b2 < 2; ++b2) {
                const double p = povm.element(b2).expectation(psi).real();
                worst = std::max(worst, std::abs(p - (b == b2 ? 1.0 : 0.0)));
            }
    return worst;
}

inline bool perfectly_readable(const EncodingFamilies& families, const BinaryPovm& povm) {
    return check_perfect_readability(families, povm) <= tol::exact;
}

struct SubspaceDecomposition {
    std::size_t dim = 0;
    std::vector<StateVector> basis0;
    std::vector<StateVector> basis1;
    double max_cross_overlap = 0.0;

    bool orthogonal() const { return max_cross_overlap <= tol::exact; }
};

inline double max_cross_overlap(std::span<const StateVector> a, std::span<const StateVector> b) {
    double m = 0.0;
    for (const auto& x : a)
        for (const auto& y : b) m = std::max(m, std::abs(inner(x, y)));
    return m;
}

/// Orthonormal bases of H0 = span(family0) and H1 = span(family1) and the
/// largest |<e0|e1>| between them.
inline SubspaceDecomposition decompose(const EncodingFamilies& families) {
    families.validate();
    SubspaceDecomposition d;
    d.dim = families.dim;
    d.basis0 = orthonormal_basis(families.family0, tol::derived);
    d.basis1 = orthonormal_basis(families.family1, tol::derived);
    d.max_cross_overlap = max_cross_overlap(d.basis0, d.basis1);
    return d;
}

/// Orthonormal basis of the orthogonal complement of H0 + H1 in C^dim.
inline std::vector<StateVector> residual_subspace(const SubspaceDecomposition& d, std::size_t dim) {
    if (!d.orthogonal()) throw NotBreakableAsStatedError("residual_subspace: decomposition is not orthogonal");
    std::vector<StateVector> all = d.basis0;
    all.insert(all.end(), d.basis1.begin(), d.basis1.end());
    const std::size_t known = all.size();
    for (std::size_t i = 0; i < dim && all.size() < dim; ++i) {
        all.push_back(StateVector::basis(dim, i));
        auto ob = orthonormal_basis(all, 1e-6);
        all = std::move(ob);
    }
    return {all.begin() + static_cast<std::ptrdiff_t>(known), all.end()};
}

/// Append zero amplitudes up to `padded_dim`.
inline StateVector pad(const StateVector& s, std::size_t padded_dim) {
    if (padded_dim < s.dim()) throw DimensionError("pad: target dimension is smaller than the state");
    Vector v = s.vector();
    v.resize(padded_dim);
    return StateVector(std::move(v));
}

/// The synthesized non-disturbing reader.
///
/// `projector0`/`projector1` act on the ambient space: onto H0 and onto its
/// complement (H1 plus any residual directions). The padded space appends
/// `padded_dim - ambient_dim` extension dimensions after the ambient ones so
/// both sectors have `sector_dim` dimensions; `embedding` is unitary on it
/// and sends sector b to logical indices [b * sector_dim, (b + 1) * sector_dim),
/// i.e. the logical qubit is the most significant factor.
struct DiscriminationMeasurement {
    std::size_t ambient_dim = 0;
    std::size_t sector_dim = 0;
    Operator projector0;
    Operator projector1;
    Operator padded_projector0;
    Operator padded_projector1;
    Operator embedding;
    std::size_t residual_dim = 0;

    std::size_t padded_dim() const { return 2 * sector_dim; }
    const Operator& projector(Bit b) const { return b ? projector1 : projector0; }

    /// I (x) |b><b| written in the logical frame and pulled back through the
    /// embedding: U^dagger (|b><b| (x) I_sector) U.
    Operator logical_projector(Bit b) const {
        Operator sel(padded_dim());
        for (std::size_t k = 0; k < sector_dim; ++k) sel(b * sector_dim + k, b * sector_dim + k) = 1.0;
        return embedding.adjoint() * sel * embedding;
    }
};

namespace detail {

inline Operator embedding_from_sectors(const std::vector<StateVector>& sector0, const std::vector<StateVector>& sector1) {
    const std::size_t m = sector0.size();
    const std::size_t n = 2 * m;
    Operator u(n);
    for (std::size_t b = 0; b < 2; ++b) {
        const auto& sec = b ? sector1 : sector0;
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t j = 0; j < n; ++j) u(b * m + k, j) = std::conj(sec[k][j]);
    }
    return u;
}

}  // namespace detail

/// Build the Lueders reader and logical embedding for perfectly readable
/// families. Throws NotBreakableAsStatedError when the spans overlap, in
/// which case no zero-error reader exists at all.
inline DiscriminationMeasurement synthesize_breaker(const EncodingFamilies& families) {
    const auto d = decompose(families);
    if (!d.orthogonal())
        throw NotBreakableAsStatedError("spans of the two families are not orthogonal (max overlap " +
                                        std::to_string(d.max_cross_overlap) + ")");
    const std::size_t dim = families.dim;
    const auto residual = residual_subspace(d, dim);

    DiscriminationMeasurement m;
    m.ambient_dim = dim;
    m.residual_dim = residual.size();
    m.projector0 = projector_onto(d.basis0, dim);
    m.projector1 = Operator::identity(dim) - m.projector0;

    const std::size_t m0 = d.basis0.size();
    const std::size_t m1 = dim - m0;
    m.sector_dim = std::max(m0, m1);
    const std::size_t padded = 2 * m.sector_dim;

    std::vector<StateVector> sector0, sector1;
    for (const auto& e : d.basis0) sector0.push_back(pad(e, padded));
    for (const auto& e : d.basis1) sector1.push_back(pad(e, padded));
    for (const auto& e : residual) sector1.push_back(pad(e, padded));
    std::size_t ext = dim;
    while (sector0.size() < m.sector_dim) sector0.push_back(StateVector::basis(padded, ext++));
    while (sector1.size() < m.sector_dim) sector1.push_back(StateVector::basis(padded, ext++));

    m.padded_projector0 = projector_onto(sector0, padded);
    m.padded_projector1 = projector_onto(sector1, padded);
    m.embedding = detail::embedding_from_sectors(sector0, sector1);
    return m;
}

struct EmbeddingCheck {
    bool unitary = false;
    double max_wrong_sector = 0.0;  // largest |amplitude| of a family image outside its sector
    bool ok = false;
};

/// Contract for an embedding U on a padded space of dimension 2 * sector_dim:
/// unitary, and every family-b state (padded) lands in logical sector b.
inline EmbeddingCheck check_embedding(const Operator& embedding, const EncodingFamilies& families,
                                      std::size_t sector_dim, double eps = tol::exact) {
    families.validate();
    EmbeddingCheck c;
    if (embedding.dim() != 2 * sector_dim || embedding.dim() < families.dim) return c;
    c.unitary = embedding.is_unitary(eps);
    for (Bit b = 0; b < 2; ++b)
        for (const auto& psi : families.family(b)) {
            const Vector img = embedding.apply(pad(psi, embedding.dim()));
            const std::size_t wrong = b ? 0 : 1;
            for (std::size_t k = 0; k < sector_dim; ++k)
                c.max_wrong_sector = std::max(c.max_wrong_sector, std::abs(img[wrong * sector_dim + k]));
        }
    c.ok = c.unitary && c.max_wrong_sector <= eps;
    return c;
}

struct LogicalRead {
    Bit bit;
    double probability;
    DensityMatrix post;
    double fidelity;  // <psi|post|psi>
};

/// Run the synthesized Lueders measurement on a pure ambient state.
inline LogicalRead read_logical_bit(const DiscriminationMeasurement& m, const StateVector& psi, RandomStream& rng) {
    if (psi.dim() != m.ambient_dim) throw DimensionError("read_logical_bit: dimension mismatch");
    const auto rho = DensityMatrix::pure(psi);
    const double p0 = std::clamp(m.projector0.expectation(psi).real(), 0.0, 1.0);
    Bit b;
    if (p0 >= 1.0 - tol::null_outcome)
        b = 0;
    else if (p0 <= tol::null_outcome)
        b = 1;
    else
        b = rng.uniform() < p0 ? 0 : 1;
    auto r = lueders_update(rho, m.projector(b));
    const double f = r.post.fidelity_with(psi);
    return {b, r.probability, std::move(r.post), f};
}

// ---------------------------------------------------------------------------
// The protocol's own families and embedding witness

/// The 12 zero-encoding and 12 one-encoding triplet states.
inline EncodingFamilies triplet_families() {
    EncodingFamilies f;
    f.dim = kTripletDim;
    for (Bit b = 0; b < 2; ++b)
        for (std::size_t pos = 0; pos < kTripletQubits; ++pos)
            for (const auto& c : ControlState::all())
                (b ? f.family1 : f.family0).push_back(TripletRecord{b, pos, c}.state());
    return f;
}

/// Permutation unitary exchanging |011> and |100>; with the first physical
/// qubit as logical bit it maps H0 onto |0>(x)C^4 and H1 onto |1>(x)C^4.
inline Operator triplet_swap_witness() {
    Operator u = Operator::identity(kTripletDim);
    u(3, 3) = 0.0;
    u(4, 4) = 0.0;
    u(3, 4) = 1.0;
    u(4, 3) = 1.0;
    return u;
}

// ---------------------------------------------------------------------------
// Random families and POVMs for property testing and demos

/// Families drawn inside two random orthogonal subspaces of C^dim, so a
/// perfect reader exists by construction.
inline EncodingFamilies random_readable_families(std::size_t dim, RandomStream& rng, std::size_t max_states = 5) {
    if (dim < 2) throw DimensionError("random_readable_families: need dim >= 2");
    const auto frame = random_orthonormal_basis(dim, rng);
    const std::size_t k0 = 1 + rng.below(dim - 1);
    const std::size_t k1 = 1 + rng.below(dim - k0);
    auto draw = [&](std::size_t offset, std::size_t k) {
        std::vector<StateVector> fam;
        const std::size_t count = 1 + rng.below(max_states);
        for (std::size_t s = 0; s < count; ++s) {
            Vector v(dim);
            for (std::size_t j = 0; j < k; ++j) {
                const Complex c{rng.normal(), rng.normal()};
                for (std::size_t i = 0; i < dim; ++i) v[i] += c * frame[offset + j][i];
            }
            fam.push_back(StateVector::normalize(std::move(v)));
        }
        return fam;
    };
    EncodingFamilies f;
    f.dim = dim;
    f.family0 = draw(0, k0);
    f.family1 = draw(k0, k1);
    return f;
}

/// Haar-random families, resampled until the span overlap exceeds `min_overlap`.
inline EncodingFamilies random_overlapping_families(std::size_t dim, RandomStream& rng, double min_overlap,
                                                    std::size_t max_states = 4) {
    for (;;) {
        EncodingFamilies f;
        f.dim = dim;
        const std::size_t n0 = 1 + rng.below(max_states), n1 = 1 + rng.below(max_states);
        for (std::size_t i = 0; i < n0; ++i) f.family0.push_back(random_state(dim, rng));
        for (std::size_t i = 0; i < n1; ++i) f.family1.push_back(random_state(dim, rng));
        if (decompose(f).max_cross_overlap > min_overlap) return f;
    }
}

/// Random binary POVM: P0 diagonal in a Haar-random frame with eigenvalues
/// that are each 0, 1 or uniform in [0, 1]; P1 = I - P0.
inline BinaryPovm random_povm(std::size_t dim, RandomStream& rng) {
    const auto frame = random_orthonormal_basis(dim, rng);
    Operator p0(dim);
    for (const auto& v : frame) {
        const auto kind = rng.below(3);
        const double lambda = kind == 0 ? 0.0 : kind == 1 ? 1.0 : rng.uniform();
        p0 += Operator::outer(v, v) * lambda;
    }
    p0 = (p0 + p0.adjoint()) * 0.5;
    Operator p1 = Operator::identity(dim) - p0;
    return {std::move(p0), std::move(p1)};
}

}  // namespace qseal
