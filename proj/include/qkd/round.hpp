#pragma once

#include <optional>

#include "qkd/adversary.hpp"
#include "qkd/protocol.hpp"

namespace qkd {

/// Everything that happened in one simulated round.
/// Invariants: sifted implies detected; error is only meaningful when sifted.
struct RoundRecord {
  AliceChoice alice;
  int photon_n = 0;
  EveLedger eve;
  BobChoice bob;
  bool detected = false;
  bool signal_click = false;
  bool dark_click = false;
  bool decoded = false;
  std::optional<int> outcome_bit;
  bool sifted = false;
  bool error = false;
};

/// Keeps the round iff Bob decoded and his basis matches Alice's basis for
/// the qubit he announced.
RoundRecord sift(RoundRecord record);

}  // namespace qkd
