#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qkd/protocol.hpp"

namespace qkd {

enum class StrategyKind { None, InterceptResendBB84, QutritForward, QubitForward, PNS };

const char* to_string(StrategyKind k);
StrategyKind strategy_from_string(const std::string& s);

struct EveStrategy {
  StrategyKind kind = StrategyKind::None;
  /// Error Eve induces on an attacked single-photon qubit, in [0, 1/2].
  double epsilon1 = 0.25;

  void validate() const;
  bool attacks_single_photons() const;
  /// Strategy is defined for this protocol (BB84 intercept-resend vs. qutrit attacks).
  bool compatible_with(Protocol p) const;
};

/// What Eve did to one pulse.
struct EveLedger {
  bool attacked = false;
  std::optional<int> eve_subspace;
  bool eve_decoded = false;
  bool eve_measured = false;
  std::optional<MeasBasis> eve_basis;
  std::optional<int> eve_bit;
  /// PNS: she learned the sifted bit after the basis announcement.
  bool eve_bit_known = false;
  std::optional<StateVec> stored_qutrit;
  int stored_copies = 0;
};

struct Interception {
  Signal forwarded;
  EveLedger ledger;
};

/// Eve's action on a single-photon pulse.
///
/// intercept_resend_bb84 measures the qubit and resends her eigenstate.
/// qutrit_forward decodes a random subspace (Born probability, 2/3 for
/// encoded states), measures, and forwards a fresh qutrit whose attacked
/// qubit carries her result and whose other qubit is random; a failed
/// decode forwards vacuum. qubit_forward is the same but forwards the bare
/// two-level qubit on the decoded subspace's kets.
///
/// epsilon1 is realised as: measure with probability min(1, 4 eps1)
/// (otherwise pass the decoded qubit on untouched), then flip the resent
/// bit with probability max(0, 2 (eps1 - 1/4)). eps1 = 1/4 is plain
/// intercept-resend in a random basis.
///
/// Throws std::logic_error if the strategy does not apply to the state
/// (e.g. BB84 intercept-resend on a qutrit, or pns on one photon).
Interception attack_single_photon(const EveStrategy& strategy, const StateVec& alice_state, RandomStream& rng);

struct PnsOutcome {
  bool eve_learns_bit = false;
  std::optional<int> bit;
  int stored_copies = 0;
};

/// Replays Eve's stored photons after Bob's announcement. For the qutrit
/// protocol each stored copy independently projects onto the announced
/// subspace with Born probability; on the first success she measures in the
/// announced basis. BB84 copies are always readable.
PnsOutcome attack_pns(const AliceChoice& alice, int photon_n, std::optional<int> announced_subspace,
                      MeasBasis announced_basis, RandomStream& rng);

struct MatchStats {
  std::uint64_t conditioned_trials = 0;
  std::uint64_t matches = 0;
  double frequency = 0.0;
  double standard_error = 0.0;
};

/// Qutrit-forward rounds conditioned on both Eve and Bob decoding: how often
/// they used the same subspace. Subspaces are uniform unless pinned.
MatchStats eve_matches_bob_subspace(std::uint64_t trials, std::uint64_t seed,
                                    std::optional<int> eve_subspace = std::nullopt,
                                    std::optional<int> bob_subspace = std::nullopt);

/// Analytic sifted-error rates of the single-photon strategies.
double qutrit_forward_error(double epsilon1);
double qubit_forward_error(double epsilon1);
/// Eve's information per sifted bit for those strategies.
double qutrit_forward_information(double epsilon1);
double qubit_forward_information(double epsilon1);

}  // namespace qkd
