#pragma once

// Umbrella header: tail-probability bounds from the operational view of the
// Chernoff inequality, with the numerical machinery (quadrature, scalar
// minimization, operator series) they are built on.

#include "tailbound/bounds.hpp"
#include "tailbound/cli.hpp"
#include "tailbound/convolution.hpp"
#include "tailbound/distribution.hpp"
#include "tailbound/errors.hpp"
#include "tailbound/extended_real.hpp"
#include "tailbound/interval.hpp"
#include "tailbound/operational.hpp"
#include "tailbound/optimize.hpp"
#include "tailbound/quadrature.hpp"
#include "tailbound/render.hpp"
#include "tailbound/shift_function.hpp"
#include "tailbound/special.hpp"
#include "tailbound/verify.hpp"
