#pragma once

#include <cstdint>
#include <optional>

#include "zeno/linalg.hpp"

namespace zeno {

/// Random relative fluctuation of the strong (interior) couplings.
struct Fluctuation {
  double relative_amplitude = 0.0;  ///< in [0, 0.2]
  std::uint64_t rng_seed = 0;
};

/// Parameters of a tight-binding chain with weak end bonds.
///
/// Sites are numbered 1..n_sites. Bonds (1,2) and (N-1,N) carry the weak
/// coupling k; bonds (2,3)..(N-2,N-1) carry the strong coupling lambda_inv*k.
/// An optional on-site energy delta_omega sits on `shift_site` (even, interior).
struct ChainSpec {
  int n_sites = 4;
  double k = 1.0;
  double lambda_inv = 20.0;
  std::optional<double> delta_omega;
  int shift_site = 2;
  std::optional<Fluctuation> fluctuation;

  double lambda() const noexcept { return 1.0 / lambda_inv; }
  bool is_modified() const noexcept { return delta_omega.has_value() && *delta_omega != 0.0; }

  /// Throws ValidationError naming the first invalid field.
  void validate() const;
};

/// The three tridiagonal operators of a chain:
///   h_total = lambda_inv * h_watch + h_weak + diag(onsite).
/// h_watch holds only the interior couplings (unit strength k, optionally
/// fluctuated); its first and last rows are zero.
struct ChainHamiltonians {
  SymTridiagd h_total;
  SymTridiagd h_watch;
  SymTridiagd h_weak;
  Eigen::VectorXd onsite;
  double lambda_inv = 1.0;

  /// The strong operator in perturbative units, h_watch + lambda * diag(onsite),
  /// so that h_total = lambda_inv * (watch_with_shift() + lambda * h_weak).
  SymTridiagd watch_with_shift() const;

  Index size() const noexcept { return h_total.size(); }
};

ChainHamiltonians build_chain(const ChainSpec& spec);

/// Rows/columns 2..N-1 of a watching operator (the block left after removing
/// the decoupled end sites).
SymTridiagd interior_block(const SymTridiagd& watch);

/// Strong couplings k_2..k_{N-2} actually used by a chain (bond i joins
/// sites i and i+1).
Eigen::VectorXd interior_couplings(const ChainHamiltonians& chain);

}  // namespace zeno
