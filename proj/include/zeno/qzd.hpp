#pragma once

#include <string>
#include <string_view>

#include "zeno/linalg.hpp"

namespace zeno {

enum class QzdOrder { no_dynamics, zeroth, first, higher_or_none };

std::string_view to_string(QzdOrder order) noexcept;

struct QzdClassification {
  bool watch_annihilates_initial = false;
  int zero_level_dimension = 0;
  QzdOrder order = QzdOrder::no_dynamics;
  bool prerequisite_I = false;
  double commutator_order0 = 0.0;  ///< ||[H0_QZD, rho0]||_F
  double commutator_order1 = 0.0;  ///< ||[lambda H1_QZD, rho0]||_F
  std::string notes;
};

/// Decides the coherent-QZD order of the initial state `psi0` under
/// lambda^-1 * h_watch + h_weak. `h_watch` must already include any on-site
/// shift in perturbative units (ChainHamiltonians::watch_with_shift()).
///
/// Throws AssumptionViolation when ||h_watch psi0|| > tol ||h_watch||.
QzdClassification classify(const SymTridiagd& h_watch, const SymTridiagd& h_weak, double lambda,
                           const State& psi0, double tol = 1e-8);

struct LeakageReport;

struct PrerequisiteIIResult {
  double delta = 0.0;
  double delta_threshold = 0.0;
  bool passed = false;
  double attained_at = 0.0;
};

/// Leakage criterion delta < delta0, 0 < delta0 < 1.
PrerequisiteIIResult check_prerequisite_ii(const LeakageReport& report, double delta0);

}  // namespace zeno
