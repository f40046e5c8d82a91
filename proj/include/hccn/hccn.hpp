#pragma once

#include "hccn/coverage.hpp"
#include "hccn/errors.hpp"
#include "hccn/mathkit/laplace.hpp"
#include "hccn/mathkit/quadrature.hpp"
#include "hccn/mathkit/special.hpp"
#include "hccn/mcsim/channel.hpp"
#include "hccn/mcsim/deployment.hpp"
#include "hccn/mcsim/estimate.hpp"
#include "hccn/mcsim/rng.hpp"
#include "hccn/model.hpp"
#include "hccn/moments.hpp"
#include "hccn/params.hpp"
#include "hccn/rate.hpp"
#include "hccn/sweep.hpp"
