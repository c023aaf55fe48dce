// femlite.hpp: umbrella header.

#pragma once

#include "femlite/assembly.hpp"
#include "femlite/bench.hpp"
#include "femlite/convergence.hpp"
#include "femlite/dense.hpp"
#include "femlite/error.hpp"
#include "femlite/matrix_market.hpp"
#include "femlite/mesh.hpp"
#include "femlite/mesh_io.hpp"
#include "femlite/presets.hpp"
#include "femlite/quadrature.hpp"
#include "femlite/solver.hpp"
#include "femlite/sparse.hpp"
#include "femlite/system.hpp"
