#pragma once

#include <cstddef>
#include <limits>

namespace emu {

/// Outcome of an inequality sweep. `max_violation` is the largest observed
/// lhs - rhs (negative when every case holds with slack); the sweep passes
/// when it never exceeds `tolerance`.
struct CheckReport {
  bool passed = true;
  double max_violation = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  std::size_t cases = 0;
  std::size_t worst_case = 0;
  std::size_t worst_atom = 0;

  explicit CheckReport(double tol = 0.0) : tolerance(tol) {}

  void record(double violation, std::size_t case_index, std::size_t atom, double tol) {
    if (violation > max_violation) {
      max_violation = violation;
      worst_case = case_index;
      worst_atom = atom;
    }
    if (!(violation <= tol)) passed = false;
  }

  void record(double violation, std::size_t case_index = 0, std::size_t atom = 0) {
    record(violation, case_index, atom, tolerance);
  }

  void merge(const CheckReport& other) {
    if (other.max_violation > max_violation) {
      max_violation = other.max_violation;
      worst_case = other.worst_case + cases;
      worst_atom = other.worst_atom;
    }
    passed = passed && other.passed;
    cases += other.cases;
  }
};

}  // namespace emu
