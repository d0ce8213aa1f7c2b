#include "qkd/qcore.hpp"

#include <algorithm>
#include <cmath>

namespace qkd {

namespace {

constexpr double kDegenerateEncodeNorm = 1e-9;

std::size_t index_of(const std::vector<int>& labels, int label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  return static_cast<std::size_t>(it - labels.begin());
}

SpaceTag qubit_tag_for(int subspace) {
  return subspace == 1 ? SpaceTag::QubitA : SpaceTag::QubitB;
}

}  // namespace

std::size_t dimension_of(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::QubitA:
    case SpaceTag::QubitB:
      return 2;
    case SpaceTag::Qutrit:
      return 3;
    case SpaceTag::JointAB:
      return 4;
    case SpaceTag::JointQutritAB:
      return 12;
  }
  return 0;
}

const char* to_string(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::QubitA:
      return "qubit_a";
    case SpaceTag::QubitB:
      return "qubit_b";
    case SpaceTag::Qutrit:
      return "qutrit";
    case SpaceTag::JointAB:
      return "joint_ab";
    case SpaceTag::JointQutritAB:
      return "joint_qutrit_ab";
  }
  return "?";
}

// ---------------------------------------------------------------- StateVec

StateVec::StateVec(std::vector<Complex> amplitudes, std::vector<int> labels, SpaceTag tag)
    : amps_(std::move(amplitudes)), labels_(std::move(labels)), tag_(tag) {
  if (amps_.size() != labels_.size()) {
    throw std::invalid_argument("StateVec: amplitude and label counts differ");
  }
  if (amps_.size() != dimension_of(tag_)) {
    throw std::invalid_argument(std::string("StateVec: dimension does not match space ") +
                                to_string(tag_));
  }
}

Complex StateVec::amplitude_of(int label) const {
  const auto i = index_of(labels_, label);
  return i < amps_.size() ? amps_[i] : Complex{};
}

double StateVec::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

StateVec StateVec::normalized() const {
  const double n = std::sqrt(norm_squared());
  if (n == 0.0) throw DegenerateProjection("cannot normalize the zero vector");
  std::vector<Complex> out(amps_);
  for (auto& a : out) a /= n;
  return {std::move(out), labels_, tag_};
}

Complex inner(const StateVec& a, const StateVec& b) {
  Complex s{};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    s += std::conj(a.amplitudes()[i]) * b.amplitude_of(a.labels()[i]);
  }
  return s;
}

bool equal_up_to_phase(const StateVec& a, const StateVec& b, double tol) {
  return std::abs(std::abs(inner(a, b)) - 1.0) <= tol;
}

// --------------------------------------------------------------- Projector

Projector::Projector(std::vector<Complex> row_major, std::vector<int> labels)
    : m_(std::move(row_major)), labels_(std::move(labels)) {
  if (m_.size() != labels_.size() * labels_.size()) {
    throw std::invalid_argument("Projector: matrix is not square over its labels");
  }
}

Projector Projector::diagonal(const std::vector<int>& basis_labels, const std::vector<int>& kept) {
  const auto n = basis_labels.size();
  std::vector<Complex> m(n * n);
  for (int k : kept) {
    const auto i = index_of(basis_labels, k);
    if (i >= n) throw std::invalid_argument("Projector::diagonal: ket not in basis");
    m[i * n + i] = 1.0;
  }
  return {std::move(m), basis_labels};
}

StateVec Projector::apply(const StateVec& psi) const {
  if (psi.labels() != labels_) {
    throw std::invalid_argument("Projector::apply: basis labels differ");
  }
  const auto n = dim();
  std::vector<Complex> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out[r] += m_[r * n + c] * psi.amplitudes()[c];
  }
  return {std::move(out), labels_, psi.tag()};
}

double Projector::expectation(const StateVec& psi) const {
  const auto projected = apply(psi);
  Complex s{};
  for (std::size_t i = 0; i < dim(); ++i) s += std::conj(psi.amplitudes()[i]) * projected.amplitudes()[i];
  return s.real();
}

bool Projector::is_hermitian(double tol) const {
  for (std::size_t r = 0; r < dim(); ++r) {
    for (std::size_t c = 0; c < dim(); ++c) {
      if (std::abs(at(r, c) - std::conj(at(c, r))) > tol) return false;
    }
  }
  return true;
}

bool Projector::is_idempotent(double tol) const { return (*this * *this).max_abs_diff(*this) <= tol; }

Projector Projector::operator+(const Projector& o) const {
  std::vector<Complex> m(m_);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] += o.m_[i];
  return {std::move(m), labels_};
}

Projector Projector::operator-(const Projector& o) const {
  std::vector<Complex> m(m_);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] -= o.m_[i];
  return {std::move(m), labels_};
}

Projector Projector::operator*(const Projector& o) const {
  const auto n = dim();
  std::vector<Complex> m(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t c = 0; c < n; ++c) m[r * n + c] += at(r, k) * o.at(k, c);
  return {std::move(m), labels_};
}

double Projector::max_abs_diff(const Projector& o) const {
  double d = 0.0;
  for (std::size_t i = 0; i < m_.size(); ++i) d = std::max(d, std::abs(m_[i] - o.m_[i]));
  return d;
}

// ------------------------------------------------------------------ phases

QuarterPhase QuarterPhase::from_quarters(int quarters) { return QuarterPhase(((quarters % 4) + 4) % 4); }

QuarterPhase QuarterPhase::from_radians(double radians) {
  const double turns = radians / (kPi / 2.0);
  const double nearest = std::round(turns);
  if (!std::isfinite(radians) || std::abs(turns - nearest) * (kPi / 2.0) > 1e-9) {
    throw std::invalid_argument("phase " + std::to_string(radians) +
                                " is not in {0, pi/2, pi, 3pi/2}");
  }
  return from_quarters(static_cast<int>(nearest));
}

Complex QuarterPhase::phasor() const {
  // Exact values; avoids cos(pi/2) ~ 6e-17 noise.
  static constexpr std::array<Complex, 4> kTable{Complex{1, 0}, Complex{0, 1}, Complex{-1, 0},
                                                 Complex{0, -1}};
  return kTable[static_cast<std::size_t>(q_)];
}

PhasePair PhasePair::from_radians(double phi_a, double phi_b) {
  return {QuarterPhase::from_radians(phi_a), QuarterPhase::from_radians(phi_b)};
}

std::array<PhasePair, 16> PhasePair::all() {
  std::array<PhasePair, 16> out{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      out[static_cast<std::size_t>(4 * a + b)] = {QuarterPhase::from_quarters(a),
                                                  QuarterPhase::from_quarters(b)};
  return out;
}

const char* to_string(MeasBasis basis) { return basis == MeasBasis::B0 ? "B0" : "B1"; }

QuarterPhase basis_phase(MeasBasis basis, int bit) {
  return QuarterPhase::from_quarters(static_cast<int>(basis) + 2 * (bit & 1));
}

std::pair<MeasBasis, int> basis_and_bit(QuarterPhase phase) {
  return {static_cast<MeasBasis>(phase.quarters() % 2), phase.quarters() / 2};
}

StateVec basis_eigenstate(MeasBasis basis, int bit, std::array<int, 2> kets, SpaceTag tag) {
  const double r = 1.0 / std::sqrt(2.0);
  return {{r, r * basis_phase(basis, bit).phasor()}, {kets[0], kets[1]}, tag};
}

std::array<Projector, 2> basis_projectors(MeasBasis basis, std::array<int, 2> kets) {
  auto outer = [&](int bit) {
    const auto e = basis_eigenstate(basis, bit, kets, SpaceTag::QubitA);
    std::vector<Complex> m(4);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) m[r * 2 + c] = e.amplitudes()[r] * std::conj(e.amplitudes()[c]);
    return Projector(std::move(m), {kets[0], kets[1]});
  };
  return {outer(0), outer(1)};
}

// ---------------------------------------------------------------- encoding

std::array<int, 2> subspace_kets(int subspace) {
  if (subspace == 1) return {0, 1};
  if (subspace == 2) return {1, 2};
  throw std::invalid_argument("subspace must be 1 or 2");
}

Projector subspace_projector(int subspace) {
  const auto k = subspace_kets(subspace);
  return Projector::diagonal({0, 1, 2}, {k[0], k[1]});
}

namespace {

constexpr int kPairDim = 4;

int joint_label(int qutrit_ket, int pair_ket) { return qutrit_ket * kPairDim + pair_ket; }

std::vector<int> joint_labels() {
  std::vector<int> labels(12);
  for (int i = 0; i < 12; ++i) labels[static_cast<std::size_t>(i)] = i;
  return labels;
}

}  // namespace

Projector encoding_projector() {
  return Projector::diagonal(joint_labels(), {joint_label(0, 0), joint_label(1, 1), joint_label(2, 2)});
}

StateVec equatorial_qubit(QuarterPhase phase, SpaceTag tag) {
  const double r = 1.0 / std::sqrt(2.0);
  return {{r, r * phase.phasor()}, {0, 1}, tag};
}

StateVec encode_qutrit(const PhasePair& phases) {
  const double r = 1.0 / std::sqrt(3.0);
  return {{r, r * phases.phi_a.phasor(), r * (phases.phi_a + phases.phi_b).phasor()},
          {0, 1, 2},
          SpaceTag::Qutrit};
}

StateVec joint_pair_state(const PhasePair& phases) {
  const auto a = equatorial_qubit(phases.phi_a, SpaceTag::QubitA);
  const auto b = equatorial_qubit(phases.phi_b, SpaceTag::QubitB);
  std::vector<Complex> amps(kPairDim);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const int label = std::abs(3 * j - i);
      amps[static_cast<std::size_t>(label)] = a.amplitude_of(i) * b.amplitude_of(j);
    }
  }
  return {std::move(amps), {0, 1, 2, 3}, SpaceTag::JointAB};
}

StateVec encode_via_projection(const PhasePair& phases) {
  const double r = 1.0 / std::sqrt(3.0);
  const StateVec uniform({r, r, r}, {0, 1, 2}, SpaceTag::Qutrit);
  const auto pair = joint_pair_state(phases);

  std::vector<Complex> joint(12);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < kPairDim; ++j)
      joint[static_cast<std::size_t>(joint_label(i, j))] = uniform.amplitude_of(i) * pair.amplitude_of(j);
  const StateVec product(std::move(joint), joint_labels(), SpaceTag::JointQutritAB);

  const auto projected = encoding_projector().apply(product);
  if (projected.norm_squared() < kDegenerateEncodeNorm) {
    throw DegenerateProjection("encoding projection annihilated the input state");
  }

  // |i>|j> -> |i>|j - i mod 4>
  std::vector<Complex> shifted(12);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < kPairDim; ++j)
      shifted[static_cast<std::size_t>(joint_label(i, ((j - i) % kPairDim + kPairDim) % kPairDim))] =
          projected.amplitude_of(joint_label(i, j));

  // After the shift the state factorises as |Phi> (x) |0>.
  std::vector<Complex> factor(3);
  double residual = 0.0;
  for (int i = 0; i < 3; ++i) {
    factor[static_cast<std::size_t>(i)] = shifted[static_cast<std::size_t>(joint_label(i, 0))];
    for (int j = 1; j < kPairDim; ++j) residual += std::norm(shifted[static_cast<std::size_t>(joint_label(i, j))]);
  }
  if (residual > kAlgebraTol) {
    throw DegenerateProjection("shifted state does not factorise onto the second register's |0>");
  }
  return StateVec(std::move(factor), {0, 1, 2}, SpaceTag::Qutrit).normalized();
}

// ---------------------------------------------------------------- decoding

StateVec embed_in_qutrit(const StateVec& qubit) {
  if (qubit.tag() == SpaceTag::Qutrit) return qubit;
  std::vector<Complex> amps(3);
  for (std::size_t i = 0; i < qubit.dim(); ++i) {
    const int k = qubit.labels()[i];
    if (k < 0 || k > 2) throw std::invalid_argument("embed_in_qutrit: ket outside {0,1,2}");
    amps[static_cast<std::size_t>(k)] = qubit.amplitudes()[i];
  }
  return {std::move(amps), {0, 1, 2}, SpaceTag::Qutrit};
}

Decoded decode_qubit(const StateVec& qutrit, int subspace) {
  const auto full = embed_in_qutrit(qutrit);
  const double p = subspace_projector(subspace).expectation(full);
  if (p < kAlgebraTol) {
    throw DegenerateProjection("state has no weight in subspace " + std::to_string(subspace));
  }
  const auto kets = subspace_kets(subspace);
  const double n = std::sqrt(p);
  return {StateVec({full.amplitude_of(kets[0]) / n, full.amplitude_of(kets[1]) / n}, {kets[0], kets[1]},
                   qubit_tag_for(subspace)),
          p};
}

QuarterPhase relative_phase(const StateVec& qubit) {
  if (qubit.dim() != 2) throw std::invalid_argument("relative_phase: not a qubit");
  const Complex lo = qubit.amplitudes()[0];
  const Complex hi = qubit.amplitudes()[1];
  if (std::abs(lo) < 1e-9 || std::abs(hi) < 1e-9) {
    throw std::invalid_argument("relative_phase: qubit is not equatorial");
  }
  return QuarterPhase::from_radians(std::arg(hi / lo));
}

double prob_bit0(const StateVec& qubit, MeasBasis basis) {
  const std::array<int, 2> kets{qubit.labels()[0], qubit.labels()[1]};
  const auto e0 = basis_eigenstate(basis, 0, kets, qubit.tag());
  return std::clamp(std::norm(inner(e0, qubit)) / qubit.norm_squared(), 0.0, 1.0);
}

Measurement measure_equatorial(const StateVec& qubit, MeasBasis basis, double u) {
  if (qubit.dim() != 2) throw std::invalid_argument("measure_equatorial: not a qubit");
  const int bit = u < prob_bit0(qubit, basis) ? 0 : 1;
  const std::array<int, 2> kets{qubit.labels()[0], qubit.labels()[1]};
  return {bit, basis_eigenstate(basis, bit, kets, qubit.tag())};
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary_entropy: argument outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace qkd
