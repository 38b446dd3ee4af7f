#pragma once

// Umbrella header for the whole library.

#include "paws/compress.hpp"
#include "paws/dataset.hpp"
#include "paws/error.hpp"
#include "paws/evaluate.hpp"
#include "paws/grid.hpp"
#include "paws/io.hpp"
#include "paws/metrics.hpp"
#include "paws/perception.hpp"
#include "paws/png_io.hpp"
#include "paws/raster.hpp"
#include "paws/saliency.hpp"
#include "paws/sample.hpp"
#include "paws/samplers.hpp"
#include "paws/transport.hpp"
#include "paws/vas.hpp"
