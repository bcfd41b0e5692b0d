#pragma once

// Umbrella header: exact symbolic invariants and connection coefficients for
// systems of third-order ODEs y_i''' = f_i(x, y, y', y''), plus a
// finite-difference oracle, a small input DSL, and JSON serialization.

#include "jetcal/connection.hpp"
#include "jetcal/errors.hpp"
#include "jetcal/expr.hpp"
#include "jetcal/invariants.hpp"
#include "jetcal/jet.hpp"
#include "jetcal/numbers.hpp"
#include "jetcal/numeric.hpp"
#include "jetcal/parse.hpp"
#include "jetcal/poly.hpp"
#include "jetcal/rational_form.hpp"
#include "jetcal/serialize.hpp"
#include "jetcal/tensor.hpp"
#include "jetcal/var.hpp"
