// Umbrella header for the companding-quantizer toolkit.

#pragma once

#include "cquant/rng.hpp"
#include "cquant/quadrature.hpp"
#include "cquant/laplacian.hpp"
#include "cquant/segment_grid.hpp"
#include "cquant/approx_pdf.hpp"
#include "cquant/compressor.hpp"
#include "cquant/codebook.hpp"
#include "cquant/evaluation.hpp"
#include "cquant/serialization.hpp"
#include "cquant/cli.hpp"
