#include "qkd/protocol.hpp"

#include "qkd/round.hpp"

#include <stdexcept>

namespace qkd {

const char* to_string(Protocol p) { return p == Protocol::BB84 ? "bb84" : "qutrit"; }

Protocol protocol_from_string(const std::string& s) {
  if (s == "bb84") return Protocol::BB84;
  if (s == "qutrit") return Protocol::Qutrit;
  throw std::invalid_argument("unknown protocol '" + s + "'");
}

AliceChoice AliceChoice::bb84(int bit, MeasBasis basis) {
  AliceChoice c;
  c.protocol = Protocol::BB84;
  c.bits = {bit & 1, 0};
  c.bases = {basis, MeasBasis::B0};
  c.phases = {basis_phase(basis, bit), QuarterPhase{}};
  return c;
}

AliceChoice AliceChoice::qutrit(std::array<int, 2> bits, std::array<MeasBasis, 2> bases) {
  AliceChoice c;
  c.protocol = Protocol::Qutrit;
  c.bits = {bits[0] & 1, bits[1] & 1};
  c.bases = bases;
  c.phases = {basis_phase(bases[0], bits[0]), basis_phase(bases[1], bits[1])};
  return c;
}

int AliceChoice::bit_for(std::optional<int> subspace) const {
  return protocol == Protocol::BB84 ? bits[0] : bits[static_cast<std::size_t>(subspace.value() - 1)];
}

MeasBasis AliceChoice::basis_for(std::optional<int> subspace) const {
  return protocol == Protocol::BB84 ? bases[0] : bases[static_cast<std::size_t>(subspace.value() - 1)];
}

StateVec AliceChoice::state() const {
  if (protocol == Protocol::BB84) return equatorial_qubit(phases.phi_a);
  return encode_qutrit(phases);
}

Prepared alice_prepare(Protocol protocol, RandomStream& rng) {
  AliceChoice c;
  if (protocol == Protocol::BB84) {
    const int bit = rng.bit();
    const auto basis = static_cast<MeasBasis>(rng.bit());
    c = AliceChoice::bb84(bit, basis);
  } else {
    const int bit_a = rng.bit();
    const auto basis_a = static_cast<MeasBasis>(rng.bit());
    const int bit_b = rng.bit();
    const auto basis_b = static_cast<MeasBasis>(rng.bit());
    c = AliceChoice::qutrit({bit_a, bit_b}, {basis_a, basis_b});
  }
  return {c, c.state()};
}

BobResult bob_receive_qutrit(const Signal& signal, RandomStream& rng) {
  BobResult r;
  r.choice.subspace = rng.subspace();
  r.choice.basis = static_cast<MeasBasis>(rng.bit());
  if (!signal) return r;

  const auto full = embed_in_qutrit(*signal);
  const double p = subspace_projector(*r.choice.subspace).expectation(full);
  if (p < kAlgebraTol || rng.uniform() >= p) return r;

  const auto decoded = decode_qubit(full, *r.choice.subspace);
  r.decoded = true;
  r.outcome = measure_equatorial(decoded.qubit, r.choice.basis, rng.uniform()).bit;
  return r;
}

BobResult bob_receive_bb84(const Signal& signal, RandomStream& rng) {
  BobResult r;
  r.choice.basis = static_cast<MeasBasis>(rng.bit());
  if (!signal) return r;
  r.decoded = true;
  r.outcome = measure_equatorial(*signal, r.choice.basis, rng.uniform()).bit;
  return r;
}

BobResult bob_receive(Protocol protocol, const Signal& signal, RandomStream& rng) {
  return protocol == Protocol::BB84 ? bob_receive_bb84(signal, rng) : bob_receive_qutrit(signal, rng);
}

RoundRecord sift(RoundRecord record) {
  record.sifted = record.detected && record.decoded && record.outcome_bit.has_value() &&
                  record.bob.basis == record.alice.basis_for(record.bob.subspace);
  record.error = record.sifted && *record.outcome_bit != record.alice.bit_for(record.bob.subspace);
  return record;
}

}  // namespace qkd
