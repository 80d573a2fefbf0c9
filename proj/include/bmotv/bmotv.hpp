#pragma once

#include "bmotv/catalog.hpp"
#include "bmotv/error.hpp"
#include "bmotv/gamma_lab.hpp"
#include "bmotv/geometry.hpp"
#include "bmotv/grid.hpp"
#include "bmotv/grid_io.hpp"
#include "bmotv/lattice.hpp"
#include "bmotv/mesh.hpp"
#include "bmotv/oscillation.hpp"
#include "bmotv/packing.hpp"
#include "bmotv/parallel.hpp"
#include "bmotv/report_io.hpp"
