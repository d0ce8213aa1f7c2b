#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qkd {

using Complex = std::complex<double>;

/// Thrown when a projection leaves (numerically) nothing behind.
class DegenerateProjection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kPi = 3.14159265358979323846;

enum class SpaceTag { QubitA, QubitB, Qutrit, JointAB, JointQutritAB };

std::size_t dimension_of(SpaceTag tag);
const char* to_string(SpaceTag tag);

/// Pure state over an explicitly labelled basis. Labels name the kets the
/// amplitudes refer to, e.g. a qubit decoded from subspace 2 lives on {1, 2}.
class StateVec {
 public:
  StateVec(std::vector<Complex> amplitudes, std::vector<int> labels, SpaceTag tag);

  const std::vector<Complex>& amplitudes() const { return amps_; }
  const std::vector<int>& labels() const { return labels_; }
  SpaceTag tag() const { return tag_; }
  std::size_t dim() const { return amps_.size(); }

  /// Amplitude on the ket with the given label, 0 if the label is absent.
  Complex amplitude_of(int label) const;
  double norm_squared() const;
  StateVec normalized() const;

 private:
  std::vector<Complex> amps_;
  std::vector<int> labels_;
  SpaceTag tag_;
};

/// <a|b> over matching labels; kets present in only one state contribute 0.
Complex inner(const StateVec& a, const StateVec& b);

/// |<a|b>| == 1 within tol, i.e. equality up to a global phase.
bool equal_up_to_phase(const StateVec& a, const StateVec& b, double tol = kAlgebraTol);

/// Dense square operator on a labelled basis.
class Projector {
 public:
  Projector(std::vector<Complex> row_major, std::vector<int> labels);

  /// Sum of |k><k| over the given kets of a basis.
  static Projector diagonal(const std::vector<int>& basis_labels, const std::vector<int>& kept);

  std::size_t dim() const { return labels_.size(); }
  const std::vector<int>& labels() const { return labels_; }
  Complex at(std::size_t row, std::size_t col) const { return m_[row * dim() + col]; }

  /// P|psi>, unnormalized. psi must share this projector's labels.
  StateVec apply(const StateVec& psi) const;
  /// <psi|P|psi>
  double expectation(const StateVec& psi) const;

  bool is_hermitian(double tol = kAlgebraTol) const;
  bool is_idempotent(double tol = kAlgebraTol) const;

  Projector operator+(const Projector& other) const;
  Projector operator-(const Projector& other) const;
  Projector operator*(const Projector& other) const;
  double max_abs_diff(const Projector& other) const;

 private:
  std::vector<Complex> m_;
  std::vector<int> labels_;
};

/// Phase restricted to S = {0, pi/2, pi, 3pi/2}, stored as a quarter-turn count.
class QuarterPhase {
 public:
  constexpr QuarterPhase() = default;
  static QuarterPhase from_quarters(int quarters);
  /// Rejects angles farther than 1e-9 rad from a member of S (mod 2pi).
  static QuarterPhase from_radians(double radians);

  int quarters() const { return q_; }
  double radians() const { return q_ * kPi / 2.0; }
  Complex phasor() const;
  QuarterPhase operator+(QuarterPhase o) const { return from_quarters(q_ + o.q_); }
  bool operator==(const QuarterPhase&) const = default;

 private:
  explicit constexpr QuarterPhase(int q) : q_(q) {}
  int q_ = 0;
};

struct PhasePair {
  QuarterPhase phi_a;
  QuarterPhase phi_b;

  static PhasePair from_radians(double phi_a, double phi_b);
  /// All 16 members of S x S, phi_a major.
  static std::array<PhasePair, 16> all();
  bool operator==(const PhasePair&) const = default;
};

/// Equatorial measurement basis: B0 at angles {0, pi}, B1 at {pi/2, 3pi/2}.
/// Bit b corresponds to phase theta + b*pi.
enum class MeasBasis { B0 = 0, B1 = 1 };

const char* to_string(MeasBasis basis);
QuarterPhase basis_phase(MeasBasis basis, int bit);
/// Inverse of basis_phase: the (basis, bit) whose eigenstate has this phase.
std::pair<MeasBasis, int> basis_and_bit(QuarterPhase phase);

/// (|lo> + e^{i(theta + b pi)}|hi>)/sqrt2 on the two kets of a subspace.
StateVec basis_eigenstate(MeasBasis basis, int bit, std::array<int, 2> kets, SpaceTag tag);

/// The two projectors of an equatorial basis on the given subspace.
std::array<Projector, 2> basis_projectors(MeasBasis basis, std::array<int, 2> kets);

// Qutrit subspaces used for decoding: 1 -> {|0>, |1>}, 2 -> {|1>, |2>}.
std::array<int, 2> subspace_kets(int subspace);
Projector subspace_projector(int subspace);
/// Pi = sum_i |i><i| (x) |i><i| on the 12-dimensional qutrit (x) relabelled-pair space.
Projector encoding_projector();

/// (|0> + e^{i phi}|1>)/sqrt2 as a stand-alone qubit.
StateVec equatorial_qubit(QuarterPhase phase, SpaceTag tag = SpaceTag::QubitA);

/// (|0> + e^{i phi_a}|1> + e^{i(phi_a + phi_b)}|2>)/sqrt3
StateVec encode_qutrit(const PhasePair& phases);

/// Builds |phi>(x)|psi_a psi_b>, projects with Pi, applies |i>|j> -> |i>|j-i mod 4>
/// and returns the qutrit factor. Independent route to encode_qutrit.
StateVec encode_via_projection(const PhasePair& phases);

/// |psi_a> (x) |psi_b> relabelled with |i>_a|j>_b -> ||3j - i|>.
StateVec joint_pair_state(const PhasePair& phases);

struct Decoded {
  StateVec qubit;
  double success_prob;
};

/// Projects a qutrit (or a qubit embedded in qutrit kets) onto subspace 1 or 2.
Decoded decode_qubit(const StateVec& qutrit, int subspace);

/// Places a qubit that lives on qutrit kets into the full qutrit space.
StateVec embed_in_qutrit(const StateVec& qubit);

/// Relative phase arg(a_hi / a_lo) of a qubit snapped to S; throws if off-grid.
QuarterPhase relative_phase(const StateVec& qubit);

struct Measurement {
  int bit;
  StateVec post_state;
};

/// Born-rule equatorial measurement. u is a uniform sample in [0, 1).
Measurement measure_equatorial(const StateVec& qubit, MeasBasis basis, double u);

/// Probability of outcome 0 for measure_equatorial.
double prob_bit0(const StateVec& qubit, MeasBasis basis);

/// Shannon binary entropy in bits.
double binary_entropy(double x);

}  // namespace qkd
