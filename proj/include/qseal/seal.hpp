#pragma once

// Sealing of classical bits into qubit triplets, the public z-basis read,
// Alice's control-qubit check, copy grants for intended readers and the
// SWAP-test verification they run.
//
// Each bit becomes a product state of three qubits: two message qubits in
// |b> and one control qubit in one of |0_x>, |1_x>, |0_y>, |1_y> at a random
// position. Qubit position 0 is the most significant in the 8-dim triplet.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qseal/errors.hpp"
#include "qseal/qla.hpp"
#include "qseal/random.hpp"

namespace qseal {

using Bit = std::uint8_t;

inline constexpr std::size_t kTripletQubits = 3;
inline constexpr std::size_t kTripletDim = 8;

namespace mub {

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline StateVector zero() { return StateVector({1.0, 0.0}); }
inline StateVector one() { return StateVector({0.0, 1.0}); }
inline StateVector zero_x() { return StateVector({kInvSqrt2, kInvSqrt2}); }
inline StateVector one_x() { return StateVector({kInvSqrt2, -kInvSqrt2}); }
inline StateVector zero_y() { return StateVector({kInvSqrt2, Complex{0.0, kInvSqrt2}}); }
inline StateVector one_y() { return StateVector({kInvSqrt2, Complex{0.0, -kInvSqrt2}}); }

inline StateVector z(Bit b) { return b ? one() : zero(); }

/// The six states in basis order z, x, y.
inline std::array<StateVector, 6> all() { return {zero(), one(), zero_x(), one_x(), zero_y(), one_y()}; }

}  // namespace mub

enum class ControlBasis { X, Y };

struct ControlState {
    ControlBasis basis = ControlBasis::X;
    Bit bit = 0;

    StateVector state() const {
        if (basis == ControlBasis::X) return bit ? mub::one_x() : mub::zero_x();
        return bit ? mub::one_y() : mub::zero_y();
    }

    /// The other state of the same basis.
    ControlState flipped() const { return {basis, static_cast<Bit>(bit ^ 1)}; }

    /// "0_x", "1_x", "0_y" or "1_y".
    std::string label() const {
        return std::string(1, bit ? '1' : '0') + (basis == ControlBasis::X ? "_x" : "_y");
    }

    static ControlState from_label(std::string_view s) {
        if (s.size() == 3 && (s[0] == '0' || s[0] == '1') && s[1] == '_' && (s[2] == 'x' || s[2] == 'y'))
            return {s[2] == 'x' ? ControlBasis::X : ControlBasis::Y, static_cast<Bit>(s[0] - '0')};
        throw FormatError("unknown control state label '" + std::string(s) + "'");
    }

    static std::array<ControlState, 4> all() {
        return {ControlState{ControlBasis::X, 0}, ControlState{ControlBasis::X, 1}, ControlState{ControlBasis::Y, 0},
                ControlState{ControlBasis::Y, 1}};
    }

    friend bool operator==(const ControlState&, const ControlState&) = default;
};

/// Alice's secret for one triplet.
struct TripletRecord {
    Bit message_bit = 0;
    std::size_t control_position = 0;
    ControlState control;

    void validate() const {
        if (message_bit > 1) throw FormatError("message_bit must be 0 or 1");
        if (control_position >= kTripletQubits) throw FormatError("control_position must be 0, 1 or 2");
    }

    /// The single-qubit state Alice prepared at `position`.
    StateVector slot_state(std::size_t position) const {
        if (position >= kTripletQubits) throw IndexError("qubit position out of range");
        return position == control_position ? control.state() : mub::z(message_bit);
    }

    StateVector state() const {
        validate();
        return tensor(slot_state(0), slot_state(1), slot_state(2));
    }

    friend bool operator==(const TripletRecord&, const TripletRecord&) = default;
};

struct SealRecord {
    std::vector<TripletRecord> triplets;

    std::size_t size() const noexcept { return triplets.size(); }
    std::vector<Bit> message() const {
        std::vector<Bit> bits;
        for (const auto& t : triplets) bits.push_back(t.message_bit);
        return bits;
    }
};

/// The publicly stored quantum memory: one 8-dim statevector per triplet.
/// Single-writer; measurement operations replace entries in place.
class SealedMemory {
public:
    SealedMemory() = default;
    explicit SealedMemory(std::vector<StateVector> triplets) : triplets_(std::move(triplets)) {
        for (const auto& t : triplets_)
            if (t.dim() != kTripletDim) throw DimensionError("sealed triplet must be 8-dimensional");
    }

    std::size_t size() const noexcept { return triplets_.size(); }
    const StateVector& triplet(std::size_t i) const { return triplets_.at(i); }
    const std::vector<StateVector>& triplets() const noexcept { return triplets_; }

    void replace(std::size_t i, StateVector s) {
        if (s.dim() != kTripletDim) throw DimensionError("sealed triplet must be 8-dimensional");
        triplets_.at(i) = std::move(s);
    }

private:
    std::vector<StateVector> triplets_;
};

struct SealResult {
    SealedMemory memory;
    SealRecord record;
};

/// Seal an explicit list of triplet records (forced control placement).
inline SealResult seal_records(std::vector<TripletRecord> triplets) {
    if (triplets.empty()) throw EmptyMessageError("cannot seal an empty message");
    std::vector<StateVector> states;
    states.reserve(triplets.size());
    for (const auto& t : triplets) states.push_back(t.state());
    return {SealedMemory(std::move(states)), SealRecord{std::move(triplets)}};
}

/// Seal `bits`, drawing each control position and control state uniformly.
inline SealResult seal_message(std::span<const Bit> bits, RandomStream& rng) {
    if (bits.empty()) throw EmptyMessageError("cannot seal an empty message");
    std::vector<TripletRecord> triplets;
    triplets.reserve(bits.size());
    for (Bit b : bits) {
        if (b > 1) throw FormatError("message bits must be 0 or 1");
        TripletRecord t;
        t.message_bit = b;
        t.control_position = static_cast<std::size_t>(rng.below(kTripletQubits));
        t.control = ControlState::all()[rng.below(4)];
        triplets.push_back(t);
    }
    return seal_records(std::move(triplets));
}

/// Two-outcome projective measurement of one triplet qubit, outcome 0 along
/// `state` and 1 along its orthogonal complement.
inline ProjectiveMeasurement qubit_measurement(const StateVector& state, std::size_t position,
                                               std::size_t num_qubits = kTripletQubits) {
    const Operator p = Operator::outer(state, state);
    const Operator q = Operator::identity(2) - p;
    return ProjectiveMeasurement({on_qubit(p, num_qubits, position), on_qubit(q, num_qubits, position)});
}

/// Cached z-basis measurement of triplet qubit `position`.
inline const ProjectiveMeasurement& z_measurement(std::size_t position) {
    static const std::array<ProjectiveMeasurement, kTripletQubits> table{
        qubit_measurement(mub::zero(), 0), qubit_measurement(mub::zero(), 1), qubit_measurement(mub::zero(), 2)};
    return table.at(position);
}

/// Cached measurement of triplet qubit `position` in the basis of `c`,
/// outcome 0 meaning "still in c".
inline const ProjectiveMeasurement& control_measurement(const ControlState& c, std::size_t position) {
    static const auto table = [] {
        std::vector<ProjectiveMeasurement> t;
        for (const auto& cs : ControlState::all())
            for (std::size_t q = 0; q < kTripletQubits; ++q) t.push_back(qubit_measurement(cs.state(), q));
        return t;
    }();
    if (position >= kTripletQubits) throw IndexError("qubit position out of range");
    const std::size_t k = (c.basis == ControlBasis::Y ? 2 : 0) + c.bit;
    return table[k * kTripletQubits + position];
}

/// Measure every qubit of a triplet in the z-basis, collapsing it.
inline std::array<Bit, kTripletQubits> measure_triplet_z(StateVector& triplet, RandomStream& rng) {
    std::array<Bit, kTripletQubits> outcomes{};
    for (std::size_t q = 0; q < kTripletQubits; ++q) {
        auto r = born_sample(triplet, z_measurement(q), rng);
        outcomes[q] = static_cast<Bit>(r.outcome);
        triplet = std::move(r.post);
    }
    return outcomes;
}

inline Bit majority(const std::array<Bit, kTripletQubits>& o) { return (o[0] + o[1] + o[2]) >= 2 ? 1 : 0; }

/// The announced public read: z-basis measurement of each qubit followed by a
/// majority vote per triplet. Mutates `memory`.
inline std::vector<Bit> honest_read(SealedMemory& memory, RandomStream& rng) {
    std::vector<Bit> bits;
    bits.reserve(memory.size());
    for (std::size_t i = 0; i < memory.size(); ++i) {
        StateVector t = memory.triplet(i);
        bits.push_back(majority(measure_triplet_z(t, rng)));
        memory.replace(i, std::move(t));
    }
    return bits;
}

struct DetectionReport {
    std::vector<bool> per_triplet;
    bool detected = false;
};

/// Alice re-measures every control qubit in its preparation basis; a triplet
/// is flagged when the outcome is the orthogonal state. Mutates `memory`.
inline DetectionReport alice_check(SealedMemory& memory, const SealRecord& record, RandomStream& rng) {
    if (record.size() != memory.size()) throw RecordMismatchError("seal record and memory lengths differ");
    DetectionReport report;
    report.per_triplet.reserve(memory.size());
    for (std::size_t i = 0; i < memory.size(); ++i) {
        const auto& rec = record.triplets[i];
        rec.validate();
        auto r = born_sample(memory.triplet(i), control_measurement(rec.control, rec.control_position), rng);
        const bool flagged = r.outcome != 0;
        report.per_triplet.push_back(flagged);
        report.detected = report.detected || flagged;
        memory.replace(i, std::move(r.post));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Copies for intended readers

struct SlotRequest {
    std::size_t triplet_index;
    std::size_t qubit_position;
};

/// One granted qubit. Carries the state itself and its position, never the
/// classical label of the state.
struct CopyEntry {
    std::size_t triplet_index;
    std::size_t qubit_position;
    StateVector copy;
};

struct CopyGrant {
    std::vector<CopyEntry> entries;
};

inline CopyGrant distribute_copies(const SealRecord& record, std::span<const SlotRequest> requests) {
    CopyGrant grant;
    grant.entries.reserve(requests.size());
    for (const auto& r : requests) {
        if (r.triplet_index >= record.size()) throw IndexError("copy request triplet index out of range");
        if (r.qubit_position >= kTripletQubits) throw IndexError("copy request qubit position out of range");
        grant.entries.push_back({r.triplet_index, r.qubit_position,
                                 record.triplets[r.triplet_index].slot_state(r.qubit_position)});
    }
    return grant;
}

/// Requests for every control slot of the record.
inline std::vector<SlotRequest> control_slot_requests(const SealRecord& record) {
    std::vector<SlotRequest> req;
    for (std::size_t i = 0; i < record.size(); ++i) req.push_back({i, record.triplets[i].control_position});
    return req;
}

// ---------------------------------------------------------------------------
// SWAP test, realized as the two-outcome measurement onto the symmetric and
// antisymmetric subspaces of the pair.

struct SwapTestResult {
    bool pass;
    double pass_probability;
    StateVector post_a;
    StateVector post_b;
};

namespace detail {

// Project `joint` onto the (anti)symmetric subspace given the index
// permutation realizing the exchange; returns the unnormalized projection.
inline Vector exchange_projection(std::span<const Complex> joint, const std::vector<std::size_t>& swapped, bool sym) {
    Vector out(joint.size());
    const double sign = sym ? 1.0 : -1.0;
    for (std::size_t i = 0; i < joint.size(); ++i) out[i] = 0.5 * (joint[i] + sign * joint[swapped[i]]);
    return out;
}

struct PairPost {
    StateVector a;
    StateVector b;
};

// Marginal pure states after a joint projection. A product post-state is
// factored exactly; an entangled one is unravelled by measuring the second
// system in its computational basis, which reproduces the first system's
// reduced density matrix on average.
inline PairPost unravel(Vector joint, std::size_t dim_a, std::size_t dim_b, RandomStream& rng) {
    if (auto f = split_product(joint, dim_a, dim_b, 1e-12)) return {std::move(f->first), std::move(f->second)};
    double total = detail::norm_sq(joint);
    double u = rng.uniform() * total, acc = 0.0;
    std::size_t pick = dim_b - 1;
    for (std::size_t c = 0; c < dim_b; ++c) {
        double pc = 0.0;
        for (std::size_t t = 0; t < dim_a; ++t) pc += std::norm(joint[t * dim_b + c]);
        acc += pc;
        if (pc > 0.0 && u < acc) {
            pick = c;
            break;
        }
    }
    Vector a(dim_a);
    for (std::size_t t = 0; t < dim_a; ++t) a[t] = joint[t * dim_b + pick];
    return {StateVector::normalize(std::move(a)), StateVector::basis(dim_b, pick)};
}

struct ExchangeOutcome {
    bool pass;
    double pass_probability;
    Vector post;
};

inline ExchangeOutcome exchange_test(std::span<const Complex> joint, const std::vector<std::size_t>& swapped,
                                     RandomStream& rng) {
    Vector sym = exchange_projection(joint, swapped, true);
    const double p_pass = std::min(1.0, detail::norm_sq(sym));
    const bool pass = rng.uniform() < p_pass;
    Vector post = pass ? std::move(sym) : exchange_projection(joint, swapped, false);
    return {pass, p_pass, std::move(post)};
}

}  // namespace detail

/// SWAP test on two equal-dimension states: passes with probability
/// (1 + |<a|b>|^2) / 2 and leaves identical inputs untouched.
inline SwapTestResult swap_test(const StateVector& a, const StateVector& b, RandomStream& rng) {
    if (a.dim() != b.dim()) throw DimensionError("swap_test: dimension mismatch");
    const std::size_t d = a.dim();
    std::vector<std::size_t> swapped(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) swapped[i * d + j] = j * d + i;
    auto r = detail::exchange_test(kron(a.amps(), b.amps()), swapped, rng);
    auto post = detail::unravel(std::move(r.post), d, d, rng);
    return {r.pass, r.pass_probability, std::move(post.a), std::move(post.b)};
}

/// SWAP test between qubit `position` of an 8-dim triplet and a single-qubit
/// copy, on their 16-dim joint state. Both inputs are replaced by their
/// post-test states.
inline SwapTestResult swap_test_slot(const StateVector& triplet, std::size_t position, const StateVector& copy,
                                     RandomStream& rng) {
    if (triplet.dim() != kTripletDim || copy.dim() != 2) throw DimensionError("swap_test_slot: dimension mismatch");
    if (position >= kTripletQubits) throw IndexError("swap_test_slot: qubit position out of range");
    const std::size_t mask = std::size_t{1} << (kTripletQubits - 1 - position);
    std::vector<std::size_t> swapped(2 * kTripletDim);
    for (std::size_t t = 0; t < kTripletDim; ++t)
        for (std::size_t c = 0; c < 2; ++c) {
            const std::size_t slot = (t & mask) ? 1 : 0;
            const std::size_t t2 = slot == c ? t : (t ^ mask);
            swapped[t * 2 + c] = t2 * 2 + slot;
        }
    auto r = detail::exchange_test(kron(triplet.amps(), copy.amps()), swapped, rng);
    auto post = detail::unravel(std::move(r.post), kTripletDim, 2, rng);
    return {r.pass, r.pass_probability, std::move(post.a), std::move(post.b)};
}

struct BobReport {
    std::vector<bool> passed;
    bool detected = false;
};

/// An intended reader borrows each granted slot from the memory, SWAP-tests it
/// against the copy and returns it. Mutates both memory and grant.
inline BobReport bob_check(SealedMemory& memory, CopyGrant& grant, RandomStream& rng) {
    BobReport report;
    for (auto& e : grant.entries) {
        if (e.triplet_index >= memory.size()) throw IndexError("grant refers to a triplet outside the memory");
        auto r = swap_test_slot(memory.triplet(e.triplet_index), e.qubit_position, e.copy, rng);
        report.passed.push_back(r.pass);
        report.detected = report.detected || !r.pass;
        memory.replace(e.triplet_index, std::move(r.post_a));
        e.copy = std::move(r.post_b);
    }
    return report;
}

}  // namespace qseal
