#pragma once

// Umbrella header.

#include "otmix/divergences.hpp"
#include "otmix/eot.hpp"
#include "otmix/errors.hpp"
#include "otmix/fit.hpp"
#include "otmix/gmm.hpp"
#include "otmix/io.hpp"
#include "otmix/random.hpp"
#include "otmix/types.hpp"
#include "otmix/verify.hpp"
