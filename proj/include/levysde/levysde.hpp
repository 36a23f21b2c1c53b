#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/parallel.hpp"
#include "levysde/core/quadrature.hpp"
#include "levysde/core/random.hpp"
#include "levysde/core/stats.hpp"
#include "levysde/core/types.hpp"
#include "levysde/noise/jump_measure.hpp"
#include "levysde/noise/noise_bundle.hpp"
#include "levysde/noise/sampling.hpp"
#include "levysde/noise/time_grid.hpp"
#include "levysde/model/assumption.hpp"
#include "levysde/model/coefficients.hpp"
#include "levysde/model/growth.hpp"
#include "levysde/model/modulus.hpp"
#include "levysde/model/osgood.hpp"
#include "levysde/model/rate.hpp"
#include "levysde/picard/diagnostics.hpp"
#include "levysde/picard/ensemble.hpp"
#include "levysde/picard/solver.hpp"
#include "levysde/stability/bihari.hpp"
#include "levysde/stability/certificate.hpp"
#include "levysde/stability/stability_test.hpp"
#include "levysde/experiment/config.hpp"
#include "levysde/experiment/refinement.hpp"
#include "levysde/experiment/report_io.hpp"
#include "levysde/experiment/runner.hpp"
#include "levysde/experiment/scenarios.hpp"
