#pragma once

#include "trion/am_algebra.hpp"
#include "trion/basis.hpp"
#include "trion/errors.hpp"
#include "trion/labels.hpp"
#include "trion/moshinsky.hpp"
#include "trion/nodal.hpp"
#include "trion/observables.hpp"
#include "trion/potentials.hpp"
#include "trion/quadrature.hpp"
#include "trion/solver.hpp"
#include "trion/spectrum.hpp"
#include "trion/symmetry.hpp"
