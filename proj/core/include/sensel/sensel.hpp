#pragma once

#include "sensel/barrier.hpp"
#include "sensel/constraint.hpp"
#include "sensel/distributed.hpp"
#include "sensel/duality.hpp"
#include "sensel/eigen.hpp"
#include "sensel/errors.hpp"
#include "sensel/random.hpp"
#include "sensel/reweight.hpp"
#include "sensel/rounding.hpp"
#include "sensel/scenario.hpp"
#include "sensel/subgradient.hpp"
#include "sensel/thresholds.hpp"
#include "sensel/validation.hpp"
