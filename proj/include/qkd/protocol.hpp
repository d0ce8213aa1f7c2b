#pragma once

#include <array>
#include <optional>
#include <string>

#include "qkd/qcore.hpp"
#include "qkd/random.hpp"

namespace qkd {

enum class Protocol { BB84, Qutrit };

const char* to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

/// A pulse as seen by the receiver: a state vector, or nothing at all.
using Signal = std::optional<StateVec>;
inline const Signal kVacuum = std::nullopt;

/// Alice's random choices for one round. BB84 uses index 0 only; for the
/// qutrit protocol index 0 is the qubit in subspace 1 and index 1 subspace 2.
struct AliceChoice {
  Protocol protocol = Protocol::Qutrit;
  std::array<int, 2> bits{};
  std::array<MeasBasis, 2> bases{};
  PhasePair phases{};

  static AliceChoice bb84(int bit, MeasBasis basis);
  static AliceChoice qutrit(std::array<int, 2> bits, std::array<MeasBasis, 2> bases);

  int bit_for(std::optional<int> subspace) const;
  MeasBasis basis_for(std::optional<int> subspace) const;
  /// The state Alice emits: encode_qutrit(phases), or one equatorial qubit.
  StateVec state() const;
};

struct Prepared {
  AliceChoice choice;
  StateVec state;
};

Prepared alice_prepare(Protocol protocol, RandomStream& rng);

struct BobChoice {
  std::optional<int> subspace;  // qutrit only
  MeasBasis basis = MeasBasis::B0;
};

struct BobResult {
  BobChoice choice;
  bool decoded = false;
  std::optional<int> outcome;
};

/// Picks a subspace and basis uniformly, decodes with Born probability and
/// measures. Accepts a qutrit, a bare qubit living on qutrit kets, or vacuum.
BobResult bob_receive_qutrit(const Signal& signal, RandomStream& rng);

/// BB84 receiver: random basis, Born-rule measurement; vacuum is never decoded.
BobResult bob_receive_bb84(const Signal& signal, RandomStream& rng);

BobResult bob_receive(Protocol protocol, const Signal& signal, RandomStream& rng);

}  // namespace qkd
