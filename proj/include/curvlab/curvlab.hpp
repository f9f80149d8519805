#pragma once

#include "curvlab/bump.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "curvlab/flow.hpp"
#include "curvlab/format.hpp"
#include "curvlab/grid.hpp"
#include "curvlab/gz.hpp"
#include "curvlab/positivity.hpp"
#include "curvlab/profiles.hpp"
#include "curvlab/reproduce.hpp"
#include "curvlab/smoothness.hpp"
#include "curvlab/space.hpp"
