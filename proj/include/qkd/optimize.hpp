#pragma once

#include <span>
#include <vector>

#include "qkd/rates.hpp"

namespace qkd {

/// Smallest key rate (bits/pulse) counted as secure.
inline constexpr double kSecureThreshold = 1e-10;

struct MuSearch {
  double mu_min = 1e-4;
  double mu_max = 0.999;
  int grid_points = 240;      // logarithmic coarse grid
  double rel_tolerance = 1e-6;  // golden-section stopping width relative to mu
};

struct CurvePoint {
  double length_km = 0.0;
  double mu_opt = 0.0;
  double k_opt = 0.0;
  bool secure = false;
  RateBreakdown breakdown;
};

/// Key rate at the given parameters, 0 when the channel produces no clicks.
double key_rate_or_zero(Protocol protocol, const SystemParams& p);

/// Maximises K over mu: coarse log grid, then golden-section refinement
/// between the best grid point's neighbours. Never returns less than the
/// best grid value. All-zero grids come back with secure = false.
CurvePoint optimize_mu(Protocol protocol, const SystemParams& base, double length_km, const MuSearch& search = {});

enum class DistanceStatus { Ok, InsecureAtZero, BracketExceeded };

struct SecureDistance {
  double km = 0.0;
  DistanceStatus status = DistanceStatus::Ok;
};

const char* to_string(DistanceStatus s);

/// Largest length with optimised K above kSecureThreshold, by bisection over
/// [0, bracket_km] down to resolution_km.
SecureDistance secure_distance(Protocol protocol, const SystemParams& base, double bracket_km = 200.0,
                               double resolution_km = 0.01, const MuSearch& search = {});

/// One optimised point per grid length, in input order. The grid must be
/// sorted ascending. Work is split over `workers` threads.
std::vector<CurvePoint> curve(Protocol protocol, const SystemParams& base, std::span<const double> lengths_km,
                              unsigned workers = 1, const MuSearch& search = {});

/// from, from + step, ... up to and including `to` (within step * 1e-9).
std::vector<double> length_grid(double from, double to, double step);

}  // namespace qkd
