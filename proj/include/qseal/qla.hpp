#pragma once

// Small dense complex linear algebra for statevector simulation: states,
// operators, Kronecker products, orthonormalization, projectors, Born-rule
// sampling and the Lueders update. Dimensions here are tiny (at most a few
// dozen), so everything is plain row-major std::vector storage.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qseal/errors.hpp"
#include "qseal/random.hpp"

namespace qseal {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

namespace tol {
inline constexpr double exact = 1e-10;    // exactness claims
inline constexpr double derived = 1e-8;   // rank / PSD / completeness checks
inline constexpr double null_outcome = 1e-12;
}  // namespace tol

namespace detail {

inline bool all_finite(std::span<const Complex> v) {
    return std::all_of(v.begin(), v.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

inline double norm_sq(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
}

inline Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// StateVector

/// Normalized amplitude vector. Construction validates finiteness and unit
/// norm; use `StateVector::normalize` to build one from raw amplitudes.
class StateVector {
public:
    explicit StateVector(Vector amps) : amps_(std::move(amps)) {
        if (amps_.empty()) throw DimensionError("state vector must have positive dimension");
        if (!detail::all_finite(amps_)) throw InvalidStateError("non-finite amplitude");
        if (std::abs(detail::norm_sq(amps_) - 1.0) > tol::exact)
            throw InvalidStateError("state vector is not normalized");
    }

    static StateVector normalize(Vector amps) {
        if (!detail::all_finite(amps)) throw InvalidStateError("non-finite amplitude");
        const double n = std::sqrt(detail::norm_sq(amps));
        if (n == 0.0) throw InvalidStateError("cannot normalize the zero vector");
        for (auto& z : amps) z /= n;
        return StateVector(std::move(amps));
    }

    static StateVector basis(std::size_t dim, std::size_t index) {
        if (index >= dim) throw DimensionError("basis index out of range");
        Vector v(dim);
        v[index] = 1.0;
        return StateVector(std::move(v));
    }

    std::size_t dim() const noexcept { return amps_.size(); }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }
    std::span<const Complex> amps() const noexcept { return amps_; }
    const Vector& vector() const noexcept { return amps_; }

private:
    Vector amps_;
};

inline Complex inner(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw DimensionError("inner: dimension mismatch");
    return detail::dot(a.amps(), b.amps());
}

/// |<a|b>|^2, the phase-insensitive comparison used throughout.
inline double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner(a, b));
}

// ---------------------------------------------------------------------------
// Operator

/// Square complex matrix, row-major.
class Operator {
public:
    Operator() = default;
    explicit Operator(std::size_t dim) : dim_(dim), m_(dim * dim) {}
    Operator(std::size_t dim, Vector entries) : dim_(dim), m_(std::move(entries)) {
        if (m_.size() != dim * dim) throw DimensionError("operator entry count does not match dim*dim");
        if (!detail::all_finite(m_)) throw InvalidStateError("non-finite operator entry");
    }

    static Operator identity(std::size_t dim) {
        Operator r(dim);
        for (std::size_t i = 0; i < dim; ++i) r(i, i) = 1.0;
        return r;
    }

    static Operator outer(std::span<const Complex> ket, std::span<const Complex> bra) {
        if (ket.size() != bra.size()) throw DimensionError("outer: dimension mismatch");
        Operator r(ket.size());
        for (std::size_t i = 0; i < ket.size(); ++i)
            for (std::size_t j = 0; j < bra.size(); ++j) r(i, j) = ket[i] * std::conj(bra[j]);
        return r;
    }

    static Operator outer(const StateVector& ket, const StateVector& bra) {
        return outer(ket.amps(), bra.amps());
    }

    static Operator diagonal(std::span<const double> d) {
        Operator r(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) r(i, i) = d[i];
        return r;
    }

    std::size_t dim() const noexcept { return dim_; }
    Complex& operator()(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }
    const Vector& entries() const noexcept { return m_; }

    Operator adjoint() const {
        Operator r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
        return r;
    }

    Complex trace() const {
        Complex t{0.0, 0.0};
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    Vector apply(std::span<const Complex> v) const {
        if (v.size() != dim_) throw DimensionError("operator/vector dimension mismatch");
        Vector r(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            Complex s{0.0, 0.0};
            for (std::size_t j = 0; j < dim_; ++j) s += (*this)(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    Vector apply(const StateVector& v) const { return apply(v.amps()); }

    /// Expectation <v|A|v>.
    Complex expectation(std::span<const Complex> v) const { return detail::dot(v, apply(v)); }
    Complex expectation(const StateVector& v) const { return expectation(v.amps()); }

    Operator& operator+=(const Operator& o) {
        check_same(o);
        for (std::size_t k = 0; k < m_.size(); ++k) m_[k] += o.m_[k];
        return *this;
    }
    Operator& operator-=(const Operator& o) {
        check_same(o);
        for (std::size_t k = 0; k < m_.size(); ++k) m_[k] -= o.m_[k];
        return *this;
    }
    Operator& operator*=(Complex s) {
        for (auto& z : m_) z *= s;
        return *this;
    }

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(Operator a, Complex s) { return a *= s; }
    friend Operator operator*(Complex s, Operator a) { return a *= s; }

    friend Operator operator*(const Operator& a, const Operator& b) {
        a.check_same(b);
        const std::size_t n = a.dim_;
        Operator r(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) continue;
                for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    /// Largest entrywise modulus of (a - b).
    friend double max_abs_diff(const Operator& a, const Operator& b) {
        a.check_same(b);
        double d = 0.0;
        for (std::size_t k = 0; k < a.m_.size(); ++k) d = std::max(d, std::abs(a.m_[k] - b.m_[k]));
        return d;
    }

    bool is_hermitian(double eps = tol::exact) const { return max_abs_diff(*this, adjoint()) <= eps; }

    bool is_unitary(double eps = tol::exact) const {
        return max_abs_diff(adjoint() * *this, identity(dim_)) <= eps;
    }

    bool is_projector(double eps = tol::exact) const {
        return is_hermitian(eps) && max_abs_diff(*this * *this, *this) <= eps;
    }

private:
    void check_same(const Operator& o) const {
        if (o.dim_ != dim_) throw DimensionError("operator dimension mismatch");
    }

    std::size_t dim_ = 0;
    Vector m_;
};

/// True when A + eps*I admits a Cholesky factorization, i.e. the smallest
/// eigenvalue of the Hermitian part of A exceeds -eps.
inline bool is_psd(const Operator& a, double eps = tol::derived) {
    const std::size_t n = a.dim();
    Operator h = (a + a.adjoint()) * 0.5;
    std::vector<Complex> l(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = h(j, j).real() + eps;
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l[j * n + k]);
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        l[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex s = h(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * std::conj(l[j * n + k]);
            l[i * n + j] = s / ljj;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// DensityMatrix

class DensityMatrix {
public:
    explicit DensityMatrix(Operator rho) : rho_(std::move(rho)) {
        if (!rho_.is_hermitian(tol::exact)) throw InvalidStateError("density matrix is not Hermitian");
        if (std::abs(rho_.trace() - Complex{1.0, 0.0}) > tol::exact)
            throw InvalidStateError("density matrix trace is not 1");
        if (!is_psd(rho_, tol::derived)) throw InvalidStateError("density matrix is not positive semidefinite");
    }

    static DensityMatrix pure(const StateVector& psi) { return DensityMatrix(Operator::outer(psi, psi)); }

    std::size_t dim() const noexcept { return rho_.dim(); }
    const Operator& op() const noexcept { return rho_; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return rho_(i, j); }

    /// <psi|rho|psi>
    double fidelity_with(const StateVector& psi) const { return rho_.expectation(psi).real(); }

private:
    Operator rho_;
};

// ---------------------------------------------------------------------------
// Tensor products. The left operand is the more significant factor, so
// |a>|b>|c> has amplitude index 4a + 2b + c.

inline Vector kron(std::span<const Complex> a, std::span<const Complex> b) {
    Vector r;
    r.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) r.push_back(x * y);
    return r;
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
    return StateVector::normalize(kron(a.amps(), b.amps()));
}

inline Operator tensor(const Operator& a, const Operator& b) {
    const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
    Operator r(n);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) {
            const Complex aij = a(i, j);
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return r;
}

template <typename T, typename... Rest>
T tensor(const T& a, const T& b, const Rest&... rest) {
    return tensor(tensor(a, b), rest...);
}

/// Lift a single-qubit operator to `num_qubits` qubits at `position`
/// (position 0 is the most significant qubit).
inline Operator on_qubit(const Operator& single, std::size_t num_qubits, std::size_t position) {
    if (single.dim() != 2) throw DimensionError("on_qubit expects a 2x2 operator");
    if (position >= num_qubits) throw DimensionError("qubit position out of range");
    Operator r = position == 0 ? single : Operator::identity(2);
    for (std::size_t q = 1; q < num_qubits; ++q) r = tensor(r, q == position ? single : Operator::identity(2));
    return r;
}

// ---------------------------------------------------------------------------
// Orthonormalization and projectors

/// Modified Gram-Schmidt with one re-orthogonalization pass. Vectors whose
/// norm after orthogonalization is at most `eps` are dropped.
inline std::vector<StateVector> orthonormal_basis(std::span<const StateVector> vectors, double eps = tol::exact) {
    if (vectors.empty()) throw EmptyFamilyError("orthonormal_basis: empty input");
    const std::size_t dim = vectors.front().dim();
    std::vector<Vector> basis;
    for (const auto& v : vectors) {
        if (v.dim() != dim) throw DimensionError("orthonormal_basis: mixed dimensions");
        Vector w = v.vector();
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& e : basis) {
                const Complex c = detail::dot(e, w);
                for (std::size_t i = 0; i < dim; ++i) w[i] -= c * e[i];
            }
        const double n = std::sqrt(detail::norm_sq(w));
        if (n <= eps) continue;
        for (auto& z : w) z /= n;
        basis.push_back(std::move(w));
    }
    std::vector<StateVector> out;
    out.reserve(basis.size());
    for (auto& b : basis) out.push_back(StateVector::normalize(std::move(b)));
    return out;
}

/// Largest |<e_i|e_j> - delta_ij| over the list.
inline double orthonormality_defect(std::span<const StateVector> basis) {
    double d = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            const Complex g = inner(basis[i], basis[j]);
            d = std::max(d, std::abs(g - (i == j ? Complex{1.0, 0.0} : Complex{})));
        }
    return d;
}

/// P = sum_k |e_k><e_k|.
inline Operator projector_onto(std::span<const StateVector> basis, std::size_t dim) {
    Operator p(dim);
    if (basis.empty()) return p;
    for (const auto& e : basis)
        if (e.dim() != dim) throw DimensionError("projector_onto: dimension mismatch");
    if (orthonormality_defect(basis) > tol::exact)
        throw NotOrthonormalError("projector_onto: input is not orthonormal");
    for (const auto& e : basis) p += Operator::outer(e, e);
    return p;
}

inline Operator projector_onto(std::span<const StateVector> basis) {
    if (basis.empty()) throw EmptyFamilyError("projector_onto: empty basis has no dimension");
    return projector_onto(basis, basis.front().dim());
}

/// Throws CompletenessError unless `projectors` are pairwise orthogonal
/// projectors summing to the identity within tol::derived.
inline void require_complete(std::span<const Operator> projectors, std::size_t dim) {
    if (projectors.empty()) throw CompletenessError("empty projector list");
    Operator sum(dim);
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        const auto& p = projectors[i];
        if (p.dim() != dim) throw DimensionError("projector dimension mismatch");
        if (!p.is_projector(tol::derived)) throw CompletenessError("operator is not a projector");
        for (std::size_t j = i + 1; j < projectors.size(); ++j)
            if (max_abs_diff(p * projectors[j], Operator(dim)) > tol::derived)
                throw CompletenessError("projectors are not pairwise orthogonal");
        sum += p;
    }
    if (max_abs_diff(sum, Operator::identity(dim)) > tol::derived)
        throw CompletenessError("projectors do not sum to the identity");
}

// ---------------------------------------------------------------------------
// Measurement

struct BornResult {
    std::size_t outcome;
    double probability;
    StateVector post;
};

/// A complete set of pairwise orthogonal projectors, validated once on
/// construction so repeated sampling does not re-check the algebra.
class ProjectiveMeasurement {
public:
    explicit ProjectiveMeasurement(std::vector<Operator> projectors) : proj_(std::move(projectors)) {
        if (proj_.empty()) throw CompletenessError("empty projector list");
        require_complete(proj_, proj_.front().dim());
    }

    std::size_t dim() const noexcept { return proj_.front().dim(); }
    std::size_t size() const noexcept { return proj_.size(); }
    const Operator& operator[](std::size_t k) const { return proj_[k]; }
    std::span<const Operator> projectors() const noexcept { return proj_; }

private:
    std::vector<Operator> proj_;
};

inline std::vector<double> born_probabilities(const StateVector& state, const ProjectiveMeasurement& m) {
    if (state.dim() != m.dim()) throw DimensionError("born: state and projector dimensions differ");
    std::vector<double> p;
    p.reserve(m.size());
    for (const auto& proj : m.projectors()) p.push_back(std::max(0.0, proj.expectation(state).real()));
    double total = 0.0;
    for (double x : p) total += x;
    if (std::abs(total - 1.0) > tol::derived) throw CompletenessError("Born probabilities do not sum to 1");
    return p;
}

inline std::vector<double> born_probabilities(const StateVector& state, std::span<const Operator> projectors) {
    return born_probabilities(state, ProjectiveMeasurement({projectors.begin(), projectors.end()}));
}

/// Projective measurement of a pure state: outcome k with probability
/// ||P_k psi||^2, post-state P_k psi / ||P_k psi||. Zero-probability
/// outcomes are never drawn.
inline BornResult born_sample(const StateVector& state, const ProjectiveMeasurement& m, RandomStream& rng) {
    const auto probs = born_probabilities(state, m);
    double total = 0.0;
    for (double p : probs) total += p;
    const double u = rng.uniform() * total;
    std::size_t pick = probs.size();
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) continue;
        acc += probs[k];
        pick = k;
        if (u < acc) break;
    }
    return {pick, probs[pick], StateVector::normalize(m[pick].apply(state))};
}

inline BornResult born_sample(const StateVector& state, std::span<const Operator> projectors, RandomStream& rng) {
    return born_sample(state, ProjectiveMeasurement({projectors.begin(), projectors.end()}), rng);
}

struct LuedersResult {
    DensityMatrix post;
    double probability;
};

/// rho -> P rho P / Tr[P rho P].
inline LuedersResult lueders_update(const DensityMatrix& rho, const Operator& p) {
    if (p.dim() != rho.dim()) throw DimensionError("lueders_update: dimension mismatch");
    if (!p.is_projector(tol::exact)) throw InvalidStateError("lueders_update: operator is not a projector");
    Operator prp = p * rho.op() * p;
    const double prob = prp.trace().real();
    if (prob < tol::null_outcome) throw NullOutcomeError("lueders_update: outcome has zero probability");
    prp *= 1.0 / prob;
    // Symmetrize away rounding so the result passes the Hermitian check.
    prp = (prp + prp.adjoint()) * 0.5;
    return {DensityMatrix(std::move(prp)), std::min(1.0, prob)};
}

// ---------------------------------------------------------------------------
// Bipartite helpers

/// If `joint` (dim_a * dim_b amplitudes, a most significant) is a product
/// state up to `eps`, return its normalized factors.
inline std::optional<std::pair<StateVector, StateVector>> split_product(std::span<const Complex> joint, std::size_t dim_a,
                                                                        std::size_t dim_b, double eps = tol::exact) {
    if (joint.size() != dim_a * dim_b) throw DimensionError("split_product: dimension mismatch");
    std::size_t bi = 0, bj = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < dim_a; ++i)
        for (std::size_t j = 0; j < dim_b; ++j)
            if (std::abs(joint[i * dim_b + j]) > best) {
                best = std::abs(joint[i * dim_b + j]);
                bi = i;
                bj = j;
            }
    if (best <= 0.0) return std::nullopt;
    Vector a(dim_a), b(dim_b);
    for (std::size_t i = 0; i < dim_a; ++i) a[i] = joint[i * dim_b + bj];
    for (std::size_t j = 0; j < dim_b; ++j) b[j] = joint[bi * dim_b + j] / joint[bi * dim_b + bj];
    // Rank-one check: joint(i,j) == a(i) * b(j).
    for (std::size_t i = 0; i < dim_a; ++i)
        for (std::size_t j = 0; j < dim_b; ++j)
            if (std::abs(joint[i * dim_b + j] - a[i] * b[j]) > eps) return std::nullopt;
    return std::make_pair(StateVector::normalize(std::move(a)), StateVector::normalize(std::move(b)));
}

/// Reduced 2x2 density matrix of one qubit of an n-qubit pure state.
inline DensityMatrix reduced_qubit(const StateVector& state, std::size_t num_qubits, std::size_t position) {
    if (state.dim() != (std::size_t{1} << num_qubits)) throw DimensionError("reduced_qubit: dimension mismatch");
    if (position >= num_qubits) throw DimensionError("reduced_qubit: position out of range");
    const std::size_t mask = std::size_t{1} << (num_qubits - 1 - position);
    Operator r(2);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & mask) continue;
        const Complex a0 = state[i], a1 = state[i | mask];
        r(0, 0) += std::norm(a0);
        r(1, 1) += std::norm(a1);
        r(0, 1) += a0 * std::conj(a1);
        r(1, 0) += a1 * std::conj(a0);
    }
    return DensityMatrix(std::move(r));
}

// ---------------------------------------------------------------------------
// Random generation (test families, analyzer demo)

/// Haar-random pure state.
inline StateVector random_state(std::size_t dim, RandomStream& rng) {
    Vector v(dim);
    for (auto& z : v) z = {rng.normal(), rng.normal()};
    return StateVector::normalize(std::move(v));
}

/// Haar-random orthonormal basis of the full space, as a list of columns.
inline std::vector<StateVector> random_orthonormal_basis(std::size_t dim, RandomStream& rng) {
    std::vector<StateVector> out;
    while (out.size() < dim) {
        std::vector<StateVector> cand = out;
        cand.push_back(random_state(dim, rng));
        auto b = orthonormal_basis(cand, 1e-6);
        if (b.size() == out.size() + 1) out = std::move(b);
    }
    return out;
}

}  // namespace qseal
