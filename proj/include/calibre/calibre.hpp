#pragma once

#include "calibre/binning.hpp"
#include "calibre/cdf.hpp"
#include "calibre/error.hpp"
#include "calibre/forecast.hpp"
#include "calibre/interval.hpp"
#include "calibre/io.hpp"
#include "calibre/isotonic.hpp"
#include "calibre/math.hpp"
#include "calibre/metrics.hpp"
#include "calibre/monotone_map.hpp"
#include "calibre/parallel.hpp"
#include "calibre/rng.hpp"
#include "calibre/romberg.hpp"
#include "calibre/scaling.hpp"
#include "calibre/svg.hpp"
#include "calibre/synthetic.hpp"
