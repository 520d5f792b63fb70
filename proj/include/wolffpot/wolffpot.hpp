#pragma once

#include "wolffpot/admissibility.hpp"
#include "wolffpot/capacity.hpp"
#include "wolffpot/core.hpp"
#include "wolffpot/geometry.hpp"
#include "wolffpot/grid.hpp"
#include "wolffpot/inequality_lab.hpp"
#include "wolffpot/measure.hpp"
#include "wolffpot/nonlinearity.hpp"
#include "wolffpot/parallel.hpp"
#include "wolffpot/potentials.hpp"
#include "wolffpot/quadrature.hpp"
#include "wolffpot/solver.hpp"
#include "wolffpot/version.hpp"
