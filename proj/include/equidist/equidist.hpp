#pragma once

#include "equidist/diagnostics.hpp"
#include "equidist/error.hpp"
#include "equidist/experiment.hpp"
#include "equidist/ext_complex.hpp"
#include "equidist/families.hpp"
#include "equidist/jet.hpp"
#include "equidist/measure.hpp"
#include "equidist/poly.hpp"
#include "equidist/potential.hpp"
#include "equidist/roots.hpp"
