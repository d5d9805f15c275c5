#pragma once

#include "dataset.hpp"
#include "det_export.hpp"
#include "error.hpp"
#include "features.hpp"
#include "fid.hpp"
#include "geometry.hpp"
#include "image_io.hpp"
#include "imaging.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "rng.hpp"
