#pragma once

#include <stdexcept>
#include <string>

#include "qkd/protocol.hpp"

namespace qkd {

/// A parameter violates its documented range. field() names the offending key.
class InvalidParameter : public std::invalid_argument {
 public:
  InvalidParameter(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// No clicks at all (R_raw = 0); QBER and yields are undefined.
class DegenerateChannel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kSiftProbability = 0.5;
inline constexpr double kAcceptBB84 = 1.0;
inline constexpr double kAcceptQutrit = 2.0 / 3.0;

/// Physical scenario. Defaults are the reference fibre link: p_d = 1e-5,
/// eta = 10%, Q_opt = 0.5%, Gamma_b = 0.5, alpha = 0.2 dB/km.
struct SystemParams {
  double alpha_db_per_km = 0.2;
  double length_km = 0.0;
  double gamma_b = 0.5;
  double eta = 0.1;
  double p_d = 1e-5;
  double q_opt = 0.005;
  double mu = 0.1;

  /// Throws InvalidParameter naming the first field out of range.
  void validate() const;
  SystemParams with_length(double km) const;
  SystemParams with_mu(double m) const;
};

struct RateBreakdown {
  Protocol protocol = Protocol::BB84;
  double gamma_q = 0.0;
  double r_sig = 0.0;
  double r_raw = 0.0;
  double q = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  double epsilon1 = 0.0;
  double i_e = 0.0;
  double k = 0.0;
  /// Y1 hit its lower clamp: multi-photon pulses alone can account for
  /// every click, so no key can be distilled.
  bool y1_collapsed = false;
};

/// 10^(-alpha l / 10)
double transmittance(double alpha_db_per_km, double length_km);

double poisson_mass(int n, double mu);
/// P(n >= 2) = 1 - e^-mu (1 + mu), computed without cancellation for small mu.
double poisson_multi_photon(double mu);

struct RawRates {
  double gamma_q;
  double r_sig;
  double r_raw;
};

/// R_sig = 1 - exp(-mu Gamma_q Gamma_b eta), R_raw = R_sig + 2 p_d (1 - R_sig).
RawRates raw_rates(const SystemParams& p);

/// Q = p_d (1 - R_sig) / R_raw + Q_opt, capped at 1/2.
double qber(const SystemParams& p);

struct Yields {
  double y0;
  double y1;
  double y2;
  bool y1_collapsed;
};

/// Eve's best rate-compatible forwarding (f_0 = 0, f_{n>=2} = 1):
/// Y1 = 1 - P_sift P(n>=2) / R_raw clamped to [0, 1], Y2 = P_sift P(2) / R_raw
/// capped at 1 - Y1.
Yields yields(const SystemParams& p);

RateBreakdown key_rate_bb84(const SystemParams& p);
RateBreakdown key_rate_qutrit(const SystemParams& p);
RateBreakdown key_rate(Protocol protocol, const SystemParams& p);

}  // namespace qkd
