#pragma once

#include "fgfrft/adam.hpp"
#include "fgfrft/bench.hpp"
#include "fgfrft/errors.hpp"
#include "fgfrft/gft.hpp"
#include "fgfrft/graph.hpp"
#include "fgfrft/image.hpp"
#include "fgfrft/io.hpp"
#include "fgfrft/learn.hpp"
#include "fgfrft/metrics.hpp"
#include "fgfrft/pointcloud.hpp"
#include "fgfrft/rng.hpp"
#include "fgfrft/sinc.hpp"
#include "fgfrft/spectral.hpp"
#include "fgfrft/transform.hpp"
#include "fgfrft/version.hpp"
