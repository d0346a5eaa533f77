#include "lanemden/potential.hpp"

#include <cmath>
#include <numbers>

#include "lanemden/errors.hpp"

namespace lanemden {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double bump(double d, double w) {
  if (d >= w) return 0.0;
  const double x = 1.0 - (d / w) * (d / w);
  return x * x * x;
}

double trig_phase(const ModelManifold& m, const TrigTerm& t, const Point& x) {
  const auto& periods = std::get<FlatTorus>(m.kind()).periods;
  return 2.0 * std::numbers::pi * t.mode * x[t.axis] / periods[t.axis] + t.phase;
}

}  // namespace

void validate_potential(const ModelManifold& m, const PotentialSpec& h) {
  std::visit(overloaded{
                 [](const ConstantPotential& c) {
                   require(std::isfinite(c.value), ErrorCode::InvalidArgument, "constant potential must be finite");
                 },
                 [&](const RadialPotential& r) {
                   for (const auto& b : r.bumps) {
                     (void)m.canonical(b.anchor);
                     require(b.width > 0 && b.width < m.injectivity_radius(), ErrorCode::InvalidArgument,
                             "bump width must lie in (0, injectivity radius)");
                   }
                 },
                 [&](const TrigPotential& t) {
                   require(!m.is_sphere(), ErrorCode::InvalidArgument, "trigonometric potentials need a torus");
                   for (const auto& term : t.terms)
                     require(term.axis >= 0 && term.axis < m.N(), ErrorCode::InvalidArgument,
                             "trigonometric term axis out of range");
                 },
                 [&](const AmbientLinearPotential& a) {
                   require(m.is_sphere(), ErrorCode::InvalidArgument, "ambient linear potentials need a sphere");
                   require(a.direction.size() == m.N() + 1, ErrorCode::InvalidArgument,
                           "ambient direction has wrong dimension");
                 },
             },
             h);
}

double evaluate(const ModelManifold& m, const PotentialSpec& h, const Point& xi) {
  const Point x = m.canonical(xi);
  return std::visit(overloaded{
                        [](const ConstantPotential& c) { return c.value; },
                        [&](const RadialPotential& r) {
                          double v = r.offset;
                          for (const auto& b : r.bumps) v += b.amplitude * bump(m.distance(x, b.anchor), b.width);
                          return v;
                        },
                        [&](const TrigPotential& t) {
                          double v = t.offset;
                          for (const auto& term : t.terms) v += term.amplitude * std::cos(trig_phase(m, term, x));
                          return v;
                        },
                        [&](const AmbientLinearPotential& a) {
                          return a.offset + a.direction.dot(x) / std::get<Sphere>(m.kind()).radius;
                        },
                    },
                    h);
}

bool has_closed_form_gradient(const PotentialSpec& h) {
  return !std::holds_alternative<RadialPotential>(h);
}

Tangent gradient(const ModelManifold& m, const PotentialSpec& h, const Point& xi) {
  const Point x = m.canonical(xi);
  const int N = m.N();
  if (std::holds_alternative<ConstantPotential>(h)) return Tangent::Zero(N);
  if (auto* t = std::get_if<TrigPotential>(&h)) {
    const auto& periods = std::get<FlatTorus>(m.kind()).periods;
    Tangent g = Tangent::Zero(N);
    for (const auto& term : t->terms)
      g[term.axis] -= term.amplitude * std::sin(trig_phase(m, term, x)) * 2.0 * std::numbers::pi * term.mode /
                      periods[term.axis];
    return g;
  }
  if (auto* a = std::get_if<AmbientLinearPotential>(&h)) {
    // Tangential projection of the ambient gradient.
    return m.frame(x).transpose() * a->direction / std::get<Sphere>(m.kind()).radius;
  }
  const double step = 1e-5 * m.injectivity_radius();
  Tangent g(N);
  for (int i = 0; i < N; ++i) {
    const Tangent e = Tangent::Unit(N, i) * step;
    g[i] = (evaluate(m, h, m.exp(x, e)) - evaluate(m, h, m.exp(x, -e))) / (2 * step);
  }
  return g;
}

std::optional<std::function<double(double)>> radial_profile(const ModelManifold& m, const PotentialSpec& h,
                                                            const Point& xi, double r0) {
  if (auto* c = std::get_if<ConstantPotential>(&h)) {
    const double v = c->value;
    return [v](double) { return v; };
  }
  if (auto* r = std::get_if<RadialPotential>(&h)) {
    const Point x = m.canonical(xi);
    std::vector<RadialBump> centred;
    for (const auto& b : r->bumps) {
      const double d = m.distance(x, b.anchor);
      if (d < 1e-12) {
        centred.push_back(b);
      } else if (d < b.width + r0) {
        return std::nullopt;  // another anchor's bump reaches into the ball
      }
    }
    const double offset = r->offset;
    return [offset, centred](double s) {
      double v = offset;
      for (const auto& b : centred) v += b.amplitude * bump(s, b.width);
      return v;
    };
  }
  return std::nullopt;
}

}  // namespace lanemden
