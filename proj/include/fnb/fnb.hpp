#pragma once

#include "fnb/cli.hpp"
#include "fnb/complex.hpp"
#include "fnb/errors.hpp"
#include "fnb/geometry.hpp"
#include "fnb/lscover.hpp"
#include "fnb/mountain.hpp"
#include "fnb/neighbor_complex.hpp"
#include "fnb/pathfinder.hpp"
#include "fnb/plmap.hpp"
#include "fnb/rational.hpp"
#include "fnb/tucker.hpp"
