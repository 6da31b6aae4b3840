#pragma once

#include "sidkit/baselines.hpp"
#include "sidkit/cloud.hpp"
#include "sidkit/errors.hpp"
#include "sidkit/kernel.hpp"
#include "sidkit/ranking.hpp"
#include "sidkit/signed_distance.hpp"
#include "sidkit/stats.hpp"
#include "sidkit/subspace.hpp"
#include "sidkit/synthetic.hpp"
#include "sidkit/version.hpp"
