#pragma once

#include "bayesfair/errors.hpp"
#include "bayesfair/incomplete_beta.hpp"
#include "bayesfair/bayes_estimation.hpp"
#include "bayesfair/disparity.hpp"
#include "bayesfair/utility.hpp"
#include "bayesfair/dataset.hpp"
#include "bayesfair/synthetic.hpp"
#include "bayesfair/report.hpp"
