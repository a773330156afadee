#ifndef PERCIMPACT_PERCIMPACT_HPP_
#define PERCIMPACT_PERCIMPACT_HPP_

#include "percimpact/aggregation.hpp"
#include "percimpact/data_io.hpp"
#include "percimpact/errors.hpp"
#include "percimpact/indicator.hpp"
#include "percimpact/random.hpp"
#include "percimpact/report.hpp"
#include "percimpact/simulation.hpp"
#include "percimpact/statistics.hpp"

#endif  // PERCIMPACT_PERCIMPACT_HPP_
