#pragma once

// Umbrella header for the full library: disc geometry, power series, the map
// expression algebra, fixed points and range checks, truncation spectra,
// boundary nets with endomorphism models, and the text parser.

#include "discendo/disc.hpp"
#include "discendo/power_series.hpp"
#include "discendo/map_expr.hpp"
#include "discendo/fixed_point.hpp"
#include "discendo/spectrum.hpp"
#include "discendo/corona.hpp"
#include "discendo/parse.hpp"
