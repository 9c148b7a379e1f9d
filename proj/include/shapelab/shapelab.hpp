#pragma once

// Umbrella header for the whole library.

#include "arith.hpp"
#include "cubic_form.hpp"
#include "equidist.hpp"
#include "exact_sign.hpp"
#include "commands.hpp"
#include "field_table.hpp"
#include "format.hpp"
#include "haar.hpp"
#include "maximality.hpp"
#include "parallel.hpp"
#include "roots.hpp"
#include "shape_geometry.hpp"
#include "shape_space.hpp"
#include "tabulate.hpp"
