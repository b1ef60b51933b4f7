#pragma once

#include "bdsmp/error.hpp"
#include "bdsmp/laurent.hpp"
#include "bdsmp/model.hpp"
#include "bdsmp/numeric.hpp"
#include "bdsmp/reduction.hpp"
#include "bdsmp/stationary.hpp"
#include "bdsmp/builders.hpp"
#include "bdsmp/diffusion.hpp"
#include "bdsmp/simulate.hpp"
#include "bdsmp/harness.hpp"
