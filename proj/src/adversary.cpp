#include "qkd/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkd {

const char* to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::None:
      return "none";
    case StrategyKind::InterceptResendBB84:
      return "intercept_resend_bb84";
    case StrategyKind::QutritForward:
      return "qutrit_forward";
    case StrategyKind::QubitForward:
      return "qubit_forward";
    case StrategyKind::PNS:
      return "pns";
  }
  return "?";
}

StrategyKind strategy_from_string(const std::string& s) {
  for (auto k : {StrategyKind::None, StrategyKind::InterceptResendBB84, StrategyKind::QutritForward,
                 StrategyKind::QubitForward, StrategyKind::PNS}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

void EveStrategy::validate() const {
  if (!(epsilon1 >= 0.0 && epsilon1 <= 0.5)) {
    throw std::invalid_argument("epsilon1 must lie in [0, 0.5]");
  }
}

bool EveStrategy::attacks_single_photons() const {
  return kind == StrategyKind::InterceptResendBB84 || kind == StrategyKind::QutritForward ||
         kind == StrategyKind::QubitForward;
}

bool EveStrategy::compatible_with(Protocol p) const {
  switch (kind) {
    case StrategyKind::InterceptResendBB84:
      return p == Protocol::BB84;
    case StrategyKind::QutritForward:
    case StrategyKind::QubitForward:
      return p == Protocol::Qutrit;
    default:
      return true;
  }
}

namespace {

/// Eve's measure-and-resend on one equatorial qubit, tuned to eps1.
StateVec disturb_qubit(const StateVec& qubit, double epsilon1, EveLedger& ledger, RandomStream& rng) {
  const double measure_prob = std::min(1.0, 4.0 * epsilon1);
  const double flip_prob = std::max(0.0, 2.0 * (epsilon1 - 0.25));
  if (!rng.bernoulli(measure_prob)) return qubit;

  const auto basis = static_cast<MeasBasis>(rng.bit());
  const auto m = measure_equatorial(qubit, basis, rng.uniform());
  ledger.eve_measured = true;
  ledger.eve_basis = basis;
  ledger.eve_bit = m.bit;
  const int resent = rng.bernoulli(flip_prob) ? 1 - m.bit : m.bit;
  const std::array<int, 2> kets{qubit.labels()[0], qubit.labels()[1]};
  return basis_eigenstate(basis, resent, kets, qubit.tag());
}

QuarterPhase random_pauli_phase(RandomStream& rng) {
  const int bit = rng.bit();
  return basis_phase(static_cast<MeasBasis>(rng.bit()), bit);
}

}  // namespace

Interception attack_single_photon(const EveStrategy& strategy, const StateVec& alice_state, RandomStream& rng) {
  Interception out{alice_state, {}};
  auto& ledger = out.ledger;

  switch (strategy.kind) {
    case StrategyKind::None:
      return out;

    case StrategyKind::InterceptResendBB84: {
      if (alice_state.dim() != 2) throw std::logic_error("intercept_resend_bb84 needs a qubit");
      ledger.attacked = true;
      out.forwarded = disturb_qubit(alice_state, strategy.epsilon1, ledger, rng);
      return out;
    }

    case StrategyKind::QutritForward:
    case StrategyKind::QubitForward: {
      if (alice_state.tag() != SpaceTag::Qutrit) {
        throw std::logic_error(std::string(to_string(strategy.kind)) + " needs a qutrit");
      }
      ledger.attacked = true;
      const int subspace = rng.subspace();
      ledger.eve_subspace = subspace;
      const double p = subspace_projector(subspace).expectation(alice_state);
      if (p < kAlgebraTol || rng.uniform() >= p) {
        out.forwarded = kVacuum;
        return out;
      }
      ledger.eve_decoded = true;
      const auto decoded = decode_qubit(alice_state, subspace);
      const auto resent = disturb_qubit(decoded.qubit, strategy.epsilon1, ledger, rng);

      if (strategy.kind == StrategyKind::QubitForward) {
        out.forwarded = resent;
        return out;
      }
      const auto attacked_phase = relative_phase(resent);
      const auto other_phase = random_pauli_phase(rng);
      out.forwarded = subspace == 1 ? encode_qutrit({attacked_phase, other_phase})
                                    : encode_qutrit({other_phase, attacked_phase});
      return out;
    }

    case StrategyKind::PNS:
      throw std::logic_error("pns does not act on single-photon pulses");
  }
  return out;
}

PnsOutcome attack_pns(const AliceChoice& alice, int photon_n, std::optional<int> announced_subspace,
                      MeasBasis announced_basis, RandomStream& rng) {
  if (photon_n < 2) throw std::logic_error("pns needs at least two photons");
  PnsOutcome out;
  out.stored_copies = photon_n - 1;

  if (alice.protocol == Protocol::BB84) {
    out.eve_learns_bit = true;
    out.bit = measure_equatorial(alice.state(), announced_basis, rng.uniform()).bit;
    return out;
  }

  const auto stored = alice.state();
  const int subspace = announced_subspace.value();
  const double p = subspace_projector(subspace).expectation(stored);
  for (int copy = 0; copy < out.stored_copies; ++copy) {
    if (rng.uniform() < p) {
      const auto decoded = decode_qubit(stored, subspace);
      out.eve_learns_bit = true;
      out.bit = measure_equatorial(decoded.qubit, announced_basis, rng.uniform()).bit;
      break;
    }
  }
  return out;
}

MatchStats eve_matches_bob_subspace(std::uint64_t trials, std::uint64_t seed, std::optional<int> eve_subspace,
                                    std::optional<int> bob_subspace) {
  MatchStats s;
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto rng = RandomStream::for_round(seed, i);
    const auto alice = alice_prepare(Protocol::Qutrit, rng);

    const int eve = eve_subspace ? *eve_subspace : rng.subspace();
    if (rng.uniform() >= subspace_projector(eve).expectation(alice.state)) continue;

    // Eve's fresh qutrit is again an encoded state; Bob's decode statistics
    // do not depend on which Pauli states she re-encodes.
    const auto forwarded = encode_qutrit({random_pauli_phase(rng), random_pauli_phase(rng)});
    const int bob = bob_subspace ? *bob_subspace : rng.subspace();
    if (rng.uniform() >= subspace_projector(bob).expectation(forwarded)) continue;

    ++s.conditioned_trials;
    if (eve == bob) ++s.matches;
  }
  if (s.conditioned_trials > 0) {
    const double n = static_cast<double>(s.conditioned_trials);
    s.frequency = static_cast<double>(s.matches) / n;
    s.standard_error = std::sqrt(s.frequency * (1.0 - s.frequency) / n);
  }
  return s;
}

double qutrit_forward_error(double epsilon1) { return (epsilon1 + 0.5) / 2.0; }
double qubit_forward_error(double epsilon1) { return 2.0 * epsilon1 / 3.0 + 1.0 / 6.0; }
double qutrit_forward_information(double epsilon1) { return binary_entropy(epsilon1) / 2.0; }
double qubit_forward_information(double epsilon1) { return 2.0 * binary_entropy(epsilon1) / 3.0; }

}  // namespace qkd
