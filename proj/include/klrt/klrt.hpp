#pragma once

// Kernel log-rank two-sample testing for right-censored survival data:
// the supremum of RKHS-unit-ball weighted log-rank statistics, evaluated
// exactly as a kernel quadratic form and calibrated by a Wild Bootstrap.

#include "klrt/bootstrap.hpp"
#include "klrt/csv.hpp"
#include "klrt/errors.hpp"
#include "klrt/kernels.hpp"
#include "klrt/numerics.hpp"
#include "klrt/parallel.hpp"
#include "klrt/report_io.hpp"
#include "klrt/risk_table.hpp"
#include "klrt/rng.hpp"
#include "klrt/roster.hpp"
#include "klrt/simulation.hpp"
#include "klrt/step_curve.hpp"
#include "klrt/survival_data.hpp"
#include "klrt/test_engine.hpp"
#include "klrt/version.hpp"
#include "klrt/weights.hpp"
