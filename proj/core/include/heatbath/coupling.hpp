#pragma once

#include <vector>

#include "heatbath/realization.hpp"

namespace heatbath {

/// y = c xi + d i0. h and h_bar are the output rows of the forward and
/// backward models.
struct Observable {
  RowVector c;
  double d = 0.0;
  RowVector h;
  RowVector h_bar;

  static Observable make(const RowVector& c, double d, const RowVector& c0);
};

/// Closed loops around a lossless load coupled to the line.
struct CoupledModelPair {
  Matrix gamma;      // A - b0 c0
  Matrix gamma_bar;  // A + b0 c0
  Vector input_gain; // 2 b0
  Vector b0;
  RowVector c0;
  RationalFunction K;
  /// Coefficient distance between the two routes to K.
  double k_crosscheck = 0.0;
};

/// Throws InvalidLoadError when the load certificate fails.
CoupledModelPair close_loops(const LosslessRealization& load);

/// (Z0 - 1)/(Z0 + 1) without any admissibility check.
RationalFunction scattering_formula(const RationalFunction& Z0);

/// Scattering function of a strictly proper lossless impedance. The result
/// maps the incoming wave a' to the outgoing wave b' at the port.
RationalFunction scattering_K(const RationalFunction& Z0);

/// The same function through the closed loops:
/// -c0 (sI - Gamma)^-1 b0 / c0 (sI - Gamma_bar)^-1 b0.
RationalFunction scattering_K_statespace(const CoupledModelPair& pair);

/// W = 2[h (sI - Gamma)^-1 b0 + d], the transfer from w = a' to y, and
/// Wbar = -2[h_bar (sI - Gamma_bar)^-1 b0 + d], the transfer from b' to y.
/// Wbar^-1 W = K for every observable.
struct ObservableTransfers {
  RationalFunction W;
  RationalFunction Wbar;
};
ObservableTransfers observable_transfers(const CoupledModelPair& pair, const Observable& obs);

struct Inversion {
  RationalFunction impedance;
  /// K = -1: the load is a short circuit, Z = 0.
  bool short_circuit = false;
};

/// Z = (1 + K)/(1 - K). Requires K inner with K(inf) = -1.
Inversion invert_K_to_Z(const RationalFunction& K);

/// Partial fractions of a strictly proper lossless Z. A nonpositive residue
/// raises NegativeResidueError.
FosterSpec foster_decompose(const RationalFunction& Z);

/// max | |K(jw)| - 1 | over `points` log-spaced w in [1e-3, 1e3].
double allpass_grid_residual(const RationalFunction& K, int points = 200);

/// Largest distance in a greedy nearest-pair matching of a against -b.
/// Infinite when the sizes differ.
double mirror_residual(const std::vector<Complex>& a, const std::vector<Complex>& b);

struct BathSynthesis {
  SpectralFactors factors;
  RationalFunction K;
  RationalFunction Z0;
  FosterSpec foster;
  LosslessRealization load;
  CoupledModelPair pair;
  Observable observable;
  /// max relative error of |W(jw)|^2 against Phi(jw) on the check grid.
  double spectrum_residual = 0.0;
};

/// Spectral density -> bath-coupled Foster load plus an observable whose
/// forward transfer reproduces the density. Errors carry the failing stage.
BathSynthesis spectrum_to_bath(const RationalFunction& phi);

/// Phi = W(s) W(-s) for the forward transfer of a given observable.
RationalFunction observable_spectrum(const CoupledModelPair& pair, const Observable& obs);

}  // namespace heatbath
