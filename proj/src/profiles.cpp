#include "fraclap/profiles.hpp"

#include <cmath>
#include <fstream>

namespace fraclap {

GridFunction make_grid_profile(const ProfileSpec& spec, const EigenBasis& basis, Rng& rng) {
  const DomainSpec& dom = basis.domain;
  const int n = dom.total_nodes();

  if (spec.kind == "zero") return GridFunction::zero(dom);
  if (spec.kind == "constant") return GridFunction::constant(dom, spec.amplitude);
  if (spec.kind == "eigenmode") {
    if (spec.mode > basis.size())
      throw ConfigError("profile: eigenmode " + std::to_string(spec.mode) +
                        " exceeds the basis size " + std::to_string(basis.size()));
    return GridFunction(dom, spec.amplitude * basis.eigenvectors.col(spec.mode - 1));
  }
  if (spec.kind == "random") return random_smooth(basis, rng, spec.amplitude, spec.decay);
  if (spec.kind == "file") {
    std::ifstream in(spec.path);
    if (!in) throw ConfigError("profile: cannot open '" + spec.path + "'");
    Vector v(n);
    for (int i = 0; i < n; ++i)
      if (!(in >> v[i]))
        throw ConfigError("profile: '" + spec.path + "' holds fewer than " +
                          std::to_string(n) + " values");
    return GridFunction(dom, v);
  }

  std::vector<double> center = spec.center;
  if (center.empty())
    for (int a = 0; a < dom.dim; ++a) center.push_back(0.5 * dom.lengths[a]);
  if (static_cast<int>(center.size()) != dom.dim)
    throw ConfigError("profile: center needs one entry per axis");
  double width = spec.width;
  if (width <= 0.0) {
    width = dom.lengths[0];
    for (int a = 1; a < dom.dim; ++a) width = std::min(width, dom.lengths[a]);
    width /= 5.0;
  }

  Vector v(n);
  for (int j = 0; j < n; ++j) {
    const auto x = node_coords(dom, j);
    if (spec.kind == "bump") {
      double q = 0.0;
      for (int a = 0; a < dom.dim; ++a) q += (x[a] - center[a]) * (x[a] - center[a]);
      v[j] = spec.amplitude * std::exp(-q / (2.0 * width * width));
    } else {  // hat
      double r = 0.0;
      for (int a = 0; a < dom.dim; ++a) r = std::max(r, std::abs(x[a] - center[a]));
      v[j] = spec.amplitude * std::max(0.0, 1.0 - r / width);
    }
  }
  return GridFunction(dom, v);
}

TimeSource make_time_source(const ProfileSpec& spec, const EigenBasis& basis, Rng& rng,
                            double default_dt) {
  const GridFunction g = make_grid_profile(spec, basis, rng);
  if (spec.time_shape == "constant") return TimeSource::constant(g);

  const double dt = (spec.sample_dt > 0.0) ? spec.sample_dt : default_dt;
  if (spec.time_shape == "ramp") {
    const double rate = spec.rate;
    return TimeSource::callable(
        [g, rate](double t) {
          return GridFunction(g.domain(), (rate * t) * g.values());
        },
        dt);
  }
  const double freq = spec.frequency;
  return TimeSource::callable(
      [g, freq](double t) {
        return GridFunction(g.domain(), std::sin(freq * t) * g.values());
      },
      dt);
}

}  // namespace fraclap
