#pragma once

#include "fraclap/config.hpp"
#include "fraclap/evolution.hpp"
#include "fraclap/rng.hpp"

namespace fraclap {

/// Materialize a named spatial profile on the grid.
GridFunction make_grid_profile(const ProfileSpec& spec, const EigenBasis& basis, Rng& rng);

/// Spatial profile with its time modulation; default_dt feeds the internal
/// quadrature of non-constant shapes.
TimeSource make_time_source(const ProfileSpec& spec, const EigenBasis& basis, Rng& rng,
                            double default_dt);

}  // namespace fraclap
