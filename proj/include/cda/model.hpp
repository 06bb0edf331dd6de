#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cda/assembly.hpp"
#include "cda/expression.hpp"

namespace cda {

/// A scalar coefficient on the closed unit square.
class CoefficientField {
 public:
  enum class Kind { Constant, Expression, Closure, FeFunction };

  static CoefficientField constant(double value);
  static CoefficientField expression(const std::string& text);
  static CoefficientField closure(ScalarField f, std::string description);
  static CoefficientField fe_function(const FeFunction& f);

  double operator()(const Point& p) const { return eval_(p); }
  const ScalarField& field() const { return eval_; }

  Kind kind() const { return kind_; }
  /// Expression text, constant literal, or a free-form label.
  const std::string& description() const { return description_; }

 private:
  CoefficientField(Kind kind, ScalarField f, std::string description)
      : kind_(kind), eval_(std::move(f)), description_(std::move(description)) {}

  Kind kind_;
  ScalarField eval_;
  std::string description_;
};

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// Coefficient tuple (q, b, c, f) of  -div(q∇u) + div(b u) + c u = f  with
/// homogeneous Dirichlet data, plus declared admissibility bounds.
struct ProblemSpec {
  std::string name;
  CoefficientField q = CoefficientField::constant(1.0);
  CoefficientField b1 = CoefficientField::constant(0.0);
  CoefficientField b2 = CoefficientField::constant(0.0);
  CoefficientField c = CoefficientField::constant(0.0);
  CoefficientField f = CoefficientField::constant(0.0);
  Bounds q_bounds{1.0, 1.0};
  double c_bound = 0.0;
  Bounds f_bounds{0.0, 0.0};

  VectorField b() const { return {b1.field(), b2.field()}; }

  /// Checks q0 > 0 and that sampled values on a grid_n × grid_n grid respect
  /// q0 ≤ q ≤ q1, 0 ≤ c ≤ c1, f0 ≤ f ≤ f1 (tolerance 1e-9). Throws
  /// std::invalid_argument describing the first violation.
  void validate(int grid_n = 101) const;
};

/// Observation protocol: pointwise samples on the degree-2 nodes of a
/// uniform coarse mesh, perturbed by multiplicative uniform noise.
struct ObservationSpec {
  int coarse_n = 16;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

ProblemSpec example1_spec();
ProblemSpec example2_spec();

/// "example1" | "example2"; otherwise std::invalid_argument listing the known names.
ProblemSpec problem_by_name(const std::string& name);
std::vector<std::string> known_problem_names();

/// Builds a spec from expression strings; bounds are taken from samples on
/// a 201 × 201 grid.
ProblemSpec problem_from_expressions(const std::string& q, const std::string& b1,
                                     const std::string& b2, const std::string& c,
                                     const std::string& f);

/// Each v'_j is drawn independently and uniformly from
/// [(1-delta) v_j, (1+delta) v_j]: v'_j = v_j (1 + delta (2u - 1)) with u the
/// top 53 bits of successive std::mt19937_64 outputs seeded by `seed`,
/// scaled to [0, 1). delta = 0 returns the input unchanged.
Vector apply_noise(const Vector& values, double delta, std::uint64_t seed);

}  // namespace cda
