// Umbrella header.
#pragma once

#include "mfis/config.hpp"
#include "mfis/field.hpp"
#include "mfis/forward.hpp"
#include "mfis/grid.hpp"
#include "mfis/io.hpp"
#include "mfis/quadrature.hpp"
#include "mfis/specfun.hpp"
#include "mfis/spectral.hpp"
#include "mfis/stability.hpp"
