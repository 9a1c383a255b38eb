#pragma once

#include "hyperaug/error.hpp"
#include "hyperaug/geo.hpp"
#include "hyperaug/image.hpp"
#include "hyperaug/io.hpp"
#include "hyperaug/parallel.hpp"
#include "hyperaug/pipeline.hpp"
#include "hyperaug/random.hpp"
#include "hyperaug/shapefile.hpp"
#include "hyperaug/transforms.hpp"
