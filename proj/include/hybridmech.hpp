#pragma once

#include "hybridmech/config.hpp"
#include "hybridmech/constants.hpp"
#include "hybridmech/dynamics.hpp"
#include "hybridmech/errors.hpp"
#include "hybridmech/hierarchy.hpp"
#include "hybridmech/optics.hpp"
#include "hybridmech/params.hpp"
#include "hybridmech/rates.hpp"
#include "hybridmech/reproduce.hpp"
#include "hybridmech/slab.hpp"
#include "hybridmech/sweep.hpp"
#include "hybridmech/thermal.hpp"
