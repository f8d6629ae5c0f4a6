#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfpath/connection.hpp"
#include "pfpath/unipoly.hpp"

namespace pfpath {

/// Operator sum_j c_j(t) d/dt^j annihilating res(p_1) along the pencil.
/// Coefficients are integer-primitive with positive top leading coefficient;
/// c_r is nonzero.
struct PicardFuchsOperator {
  std::vector<UniPoly> coefficients;  // c_0 .. c_r

  int order() const { return static_cast<int>(coefficients.size()) - 1; }
  int degree() const {
    int d = 0;
    for (const auto& c : coefficients) d = std::max(d, c.degree());
    return d;
  }
  std::string to_string() const;
};

struct Budget {
  double wall_clock_s = 30.0;
  long step_limit = 400'000'000;
};

enum class OdeStatus { Success, Timeout, SingularFamily };

struct FirstOdeResult {
  OdeStatus status = OdeStatus::Timeout;
  std::optional<PicardFuchsOperator> op;
  double elapsed_s = 0.0;
  std::string detail;
};

/// Derives the first Picard-Fuchs ODE of the pencil by reducing the cyclic
/// chain v_0 = res(p_1/f_t), v_{j+1} = d/dt v_j over Q(t) until the chain
/// goes linearly dependent. Honors the budget cooperatively.
FirstOdeResult first_ode(const Pencil& e, const Budget& budget = Budget{},
                         const std::atomic<bool>* cancel = nullptr);

/// Outcome of the budgeted oracle on one edge, as stored in the label store.
struct EdgeLabel {
  std::string edge;
  double elapsed_s = 0.0;
  bool success = false;
  int order = -1;   // valid iff success
  int degree = -1;  // valid iff success
  std::string failure;  // "", "timeout", "singular_family", "error"
  std::string host;
  std::int64_t timestamp_ms = 0;
  double budget_s = 30.0;
};

EdgeLabel label_edge(const Pencil& e, const Budget& budget = Budget{},
                     const std::atomic<bool>* cancel = nullptr);

std::string host_tag();

}  // namespace pfpath
