#pragma once

// Reader strategies against a sealed memory: the announced qubit-by-qubit
// read (detectable) and the collective two-outcome projective measurement on
// each triplet (undetectable on every protocol state).

#include <array>
#include <bit>
#include <cstddef>
#include <vector>

#include "qseal/errors.hpp"
#include "qseal/qla.hpp"
#include "qseal/seal.hpp"

namespace qseal {

struct AttackOutcome {
    std::vector<Bit> bits;
    std::vector<double> per_triplet_fidelity;
};

/// Projectors onto span{|000>,|001>,|010>,|100>} (bit 0) and
/// span{|111>,|110>,|101>,|011>} (bit 1): Hamming weight <= 1 versus >= 2.
inline std::array<Operator, 2> triplet_bit_projectors() {
    std::array<double, kTripletDim> d0{}, d1{};
    for (unsigned i = 0; i < kTripletDim; ++i) (std::popcount(i) <= 1 ? d0 : d1)[i] = 1.0;
    return {Operator::diagonal(d0), Operator::diagonal(d1)};
}

/// Per-triplet |<before|after>|^2.
inline std::vector<double> disturbance_report(const SealedMemory& before, const SealedMemory& after) {
    if (before.size() != after.size()) throw RecordMismatchError("disturbance_report: memory lengths differ");
    std::vector<double> f;
    f.reserve(before.size());
    for (std::size_t i = 0; i < before.size(); ++i) f.push_back(fidelity(before.triplet(i), after.triplet(i)));
    return f;
}

inline AttackOutcome single_qubit_attack(SealedMemory& memory, RandomStream& rng) {
    const SealedMemory before = memory;
    AttackOutcome out;
    out.bits = honest_read(memory, rng);
    out.per_triplet_fidelity = disturbance_report(before, memory);
    return out;
}

/// Measure {P0, P1} on every triplet. Protocol states are eigenstates of this
/// measurement, so no randomness is consumed and nothing is disturbed. A
/// triplet with both outcomes possible is rejected before any state changes.
inline AttackOutcome collective_attack(SealedMemory& memory) {
    const auto proj = triplet_bit_projectors();
    std::vector<Bit> bits;
    bits.reserve(memory.size());
    for (std::size_t i = 0; i < memory.size(); ++i) {
        const double p1 = proj[1].expectation(memory.triplet(i)).real();
        if (p1 <= tol::null_outcome)
            bits.push_back(0);
        else if (p1 >= 1.0 - tol::null_outcome)
            bits.push_back(1);
        else
            throw NotSealFormatError("triplet " + std::to_string(i) + " is not an eigenstate of the bit measurement");
    }
    AttackOutcome out;
    out.bits = bits;
    out.per_triplet_fidelity.reserve(memory.size());
    for (std::size_t i = 0; i < memory.size(); ++i) {
        const StateVector before = memory.triplet(i);
        StateVector post = StateVector::normalize(proj[bits[i]].apply(before));
        out.per_triplet_fidelity.push_back(fidelity(before, post));
        memory.replace(i, std::move(post));
    }
    return out;
}

}  // namespace qseal
