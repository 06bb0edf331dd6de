#include "cda/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cda {

CoefficientField CoefficientField::constant(double value) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << value;
  return {Kind::Constant, constant_field(value), os.str()};
}

CoefficientField CoefficientField::expression(const std::string& text) {
  Expression e = Expression::parse(text);
  return {Kind::Expression, [e](const Point& p) { return e(p.x, p.y); }, text};
}

CoefficientField CoefficientField::closure(ScalarField f, std::string description) {
  return {Kind::Closure, std::move(f), std::move(description)};
}

CoefficientField CoefficientField::fe_function(const FeFunction& f) {
  std::string label = "fe(degree=" + std::to_string(f.space().degree()) +
                      ",n=" + std::to_string(f.space().mesh().n()) + ")";
  return {Kind::FeFunction, [f](const Point& p) { return f.value(p); }, std::move(label)};
}

void ProblemSpec::validate(int grid_n) const {
  constexpr double tol = 1e-9;
  if (!(q_bounds.lo > 0.0)) {
    throw std::invalid_argument(name + ": lower conductivity bound q0 must be positive");
  }
  auto fail = [&](const std::string& what, double x, double y, double v) {
    std::ostringstream os;
    os << name << ": " << what << " violated at (" << x << ", " << y << "), value " << v;
    throw std::invalid_argument(os.str());
  };
  for (int j = 0; j < grid_n; ++j) {
    for (int i = 0; i < grid_n; ++i) {
      const Point p{static_cast<double>(i) / (grid_n - 1), static_cast<double>(j) / (grid_n - 1)};
      const double qv = q(p);
      if (qv < q_bounds.lo - tol || qv > q_bounds.hi + tol) fail("q0 <= q <= q1", p.x, p.y, qv);
      const double cv = c(p);
      if (cv < -tol || cv > c_bound + tol) fail("0 <= c <= c1", p.x, p.y, cv);
      const double fv = f(p);
      if (fv < f_bounds.lo - tol || fv > f_bounds.hi + tol) fail("f0 <= f <= f1", p.x, p.y, fv);
    }
  }
}

ProblemSpec example1_spec() {
  using std::cos, std::exp, std::sin;
  constexpr double pi = std::numbers::pi;
  ProblemSpec s;
  s.name = "example1";
  s.q = CoefficientField::closure(
      [](const Point& p) { return 2.0 * sin(3 * pi * p.x) * sin(2 * pi * p.y) - 0.7 * p.x + 5.0; },
      "2*sin(3*pi*x)*sin(2*pi*y) - 0.7*x + 5");
  s.b1 = CoefficientField::closure(
      [](const Point& p) { return 2.0 * p.x * p.x - p.y * p.y + 3.0; }, "2*x^2 - y^2 + 3");
  s.b2 = CoefficientField::closure(
      [](const Point& p) { return exp(p.x * p.x) - 2.0 * p.y * sin(3.0 * p.x) + 3.0; },
      "exp(x^2) - 2*y*sin(3*x) + 3");
  s.c = CoefficientField::closure(
      [](const Point& p) { return exp(0.2 * p.x + 0.3 * p.y) + cos(2.0 * p.x) * cos(4.0 * p.y) + 2.0; },
      "exp(0.2*x + 0.3*y) + cos(2*x)*cos(4*y) + 2");
  s.f = CoefficientField::closure(
      [](const Point& p) {
        return 1.5 * sin(6.0 * p.x - 0.4) * cos(3.0 * p.y + 0.6) + 6.0 * (p.y - 1.0) * p.y + 6.0;
      },
      "1.5*sin(6*x - 0.4)*cos(3*y + 0.6) + 6*(y - 1)*y + 6");
  // q ∈ [5 - 2 - 0.7, 5 + 2], c ≤ e^0.5 + 3, 6 - 1.5 - 1.5 ≤ f ≤ 6 + 1.5.
  s.q_bounds = {2.3, 7.0};
  s.c_bound = 4.65;
  s.f_bounds = {3.0, 7.5};
  return s;
}

ProblemSpec example2_spec() {
  using std::exp, std::sin;
  ProblemSpec s;
  s.name = "example2";
  s.q = CoefficientField::closure(
      [](const Point& p) {
        const double branch =
            p.x < 0.4 ? 20.0 * p.x * p.x + 1.0 : 15.0 * (p.x - 1.0) * (p.x - 1.0) - 1.2;
        return sin(5.0 * p.y) + 4.0 + branch;
      },
      "sin(5*y) + 4 + if(x < 0.4, 20*x^2 + 1, 15*(x - 1)^2 - 1.2)");
  s.b1 = CoefficientField::closure(
      [](const Point& p) {
        const double s2 = sin(2.0 * p.x);
        return -2.0 * s2 * s2 + p.y * p.y + 4.0;
      },
      "-2*sin(2*x)^2 + y^2 + 4");
  s.b2 = CoefficientField::closure(
      [](const Point& p) { return -p.x * p.x - 2.0 * p.y * sin(3.0 * p.y) + 4.0; },
      "-x^2 - 2*y*sin(3*y) + 4");
  s.c = CoefficientField::closure(
      [](const Point& p) { return (p.x - 1.0) * (p.x - 1.0) + sin(2.0 * p.x) + p.y * p.y + 1.0; },
      "(x - 1)^2 + sin(2*x) + y^2 + 1");
  s.f = CoefficientField::closure(
      [](const Point& p) {
        const double dx = p.x - 0.5;
        const double dy = p.y - 0.5;
        return 5.0 * exp(-10.0 * dx * dx - 10.0 * dy * dy) + 1.8 * exp(-p.x) * exp(0.5 * p.y) + 2.0;
      },
      "5*exp(-10*(x - 0.5)^2 - 10*(y - 0.5)^2) + 1.8*exp(-x)*exp(0.5*y) + 2");
  s.q_bounds = {1.8, 9.2};
  s.c_bound = 4.0;
  s.f_bounds = {2.0, 10.0};
  return s;
}

std::vector<std::string> known_problem_names() { return {"example1", "example2"}; }

ProblemSpec problem_by_name(const std::string& name) {
  if (name == "example1") return example1_spec();
  if (name == "example2") return example2_spec();
  std::string known;
  for (const auto& k : known_problem_names()) known += (known.empty() ? "" : ", ") + k;
  throw std::invalid_argument("unknown problem '" + name + "' (known: " + known + ")");
}

ProblemSpec problem_from_expressions(const std::string& q, const std::string& b1,
                                     const std::string& b2, const std::string& c,
                                     const std::string& f) {
  ProblemSpec s;
  s.name = "custom";
  s.q = CoefficientField::expression(q);
  s.b1 = CoefficientField::expression(b1);
  s.b2 = CoefficientField::expression(b2);
  s.c = CoefficientField::expression(c);
  s.f = CoefficientField::expression(f);
  constexpr int grid = 201;
  double qlo = std::numeric_limits<double>::infinity(), qhi = -qlo;
  double chi = 0.0, flo = qlo, fhi = -qlo;
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      const Point p{static_cast<double>(i) / (grid - 1), static_cast<double>(j) / (grid - 1)};
      const double qv = s.q(p), cv = s.c(p), fv = s.f(p);
      qlo = std::min(qlo, qv);
      qhi = std::max(qhi, qv);
      chi = std::max(chi, cv);
      flo = std::min(flo, fv);
      fhi = std::max(fhi, fv);
    }
  }
  s.q_bounds = {qlo, qhi};
  s.c_bound = chi;
  s.f_bounds = {flo, fhi};
  return s;
}

Vector apply_noise(const Vector& values, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw std::invalid_argument("noise level delta must lie in [0, 1), got " +
                                std::to_string(delta));
  }
  if (delta == 0.0) return values;
  std::mt19937_64 gen(seed);
  Vector out(values.size());
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    out[j] = values[j] * (1.0 + delta * (2.0 * u - 1.0));
  }
  return out;
}

}  // namespace cda
