#pragma once

// Umbrella header: resolvent construction and evaluation for Volterra equations
// of the second kind with sub-unit-mass convolution kernels.

#include "certificates.hpp"
#include "coefficients.hpp"
#include "exceptions.hpp"
#include "gamma.hpp"
#include "json_io.hpp"
#include "kernels.hpp"
#include "oracle.hpp"
#include "resolvent.hpp"
#include "solver.hpp"
#include "validation.hpp"
