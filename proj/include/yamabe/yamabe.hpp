#pragma once

// Umbrella header for the boundary-Yamabe energy expansion toolkit.

#include "yamabe/bubble.hpp"
#include "yamabe/curvature.hpp"
#include "yamabe/curvature_io.hpp"
#include "yamabe/discrete_quotient.hpp"
#include "yamabe/energy_expansion.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/exact_integrals.hpp"
#include "yamabe/polynomial.hpp"
#include "yamabe/quadrature.hpp"
#include "yamabe/rational.hpp"
#include "yamabe/report.hpp"
#include "yamabe/scaled_rational.hpp"
#include "yamabe/sphere_moments.hpp"
#include "yamabe/tensor.hpp"
