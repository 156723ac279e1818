#pragma once

// Umbrella header for the finite-space optimal transport laboratory.

#include "cdk/branching.hpp"
#include "cdk/entropy.hpp"
#include "cdk/errors.hpp"
#include "cdk/generate.hpp"
#include "cdk/geodesic.hpp"
#include "cdk/geodesic_plan.hpp"
#include "cdk/log2_demo.hpp"
#include "cdk/measure.hpp"
#include "cdk/mixing.hpp"
#include "cdk/polytope.hpp"
#include "cdk/rng.hpp"
#include "cdk/scalar.hpp"
#include "cdk/simplex.hpp"
#include "cdk/space.hpp"
#include "cdk/strong_cd.hpp"
#include "cdk/transport.hpp"
#include "cdk/uniqueness.hpp"
