#pragma once

#include "percmax/errors.hpp"
#include "percmax/geometry.hpp"
#include "percmax/engine.hpp"
#include "percmax/rectangles.hpp"
#include "percmax/moves.hpp"
#include "percmax/recurrence.hpp"
#include "percmax/schemes.hpp"
#include "percmax/oracle.hpp"
#include "percmax/bounds.hpp"
#include "percmax/io.hpp"
#include "percmax/svg.hpp"
