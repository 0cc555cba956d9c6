#pragma once

#include "relayperf/errors.hpp"
#include "relayperf/quadrature.hpp"
#include "relayperf/special_functions.hpp"
#include "relayperf/gauss_laguerre.hpp"
#include "relayperf/fading.hpp"
#include "relayperf/relay.hpp"
#include "relayperf/pade_mgf.hpp"
#include "relayperf/metrics.hpp"
#include "relayperf/simulate.hpp"
#include "relayperf/scenario.hpp"
#include "relayperf/commands.hpp"
#include "relayperf/validate.hpp"
