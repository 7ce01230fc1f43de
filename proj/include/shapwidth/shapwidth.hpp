#pragma once

// Shapley values for the mean width of 3-D convex hulls, via a polar-angle
// sweep over point pairs backed by a dynamic-convolution data structure,
// with exact and Monte-Carlo oracles for verification.

#include "shapwidth/dynconv.hpp"
#include "shapwidth/errors.hpp"
#include "shapwidth/fft.hpp"
#include "shapwidth/geometry.hpp"
#include "shapwidth/hull3d.hpp"
#include "shapwidth/io.hpp"
#include "shapwidth/kernel.hpp"
#include "shapwidth/oracle.hpp"
#include "shapwidth/result.hpp"
#include "shapwidth/shapley.hpp"
#include "shapwidth/sweep.hpp"
#include "shapwidth/util.hpp"
